#include "cavlie/control.hpp"

#include "cavlie/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace cavlie::ctrl {

double ControlSchedule::total_time() const {
    double t = 0.0;
    for (const auto& s : segments) {
        if (s.duration < 0) throw PreconditionError("ControlSchedule: negative duration");
        t += s.duration;
    }
    return t;
}

ControlSchedule ControlSchedule::reversed_negated() const {
    ControlSchedule out;
    out.segments.assign(segments.rbegin(), segments.rend());
    for (auto& s : out.segments) s.amplitude = -s.amplitude;
    return out;
}

std::vector<int> propagation_indices(const ModelSpace& space, int K) {
    if (auto split = ladder_split(space)) {
        return sym::f_space_indices(space, *split, K);
    }
    return sym::truncated_indices(space, K);
}

namespace {

// A generator restricted to the propagation subspace: eigenframe (exactly
// block-diagonal for charge-conserving generators) plus the norm of the
// ambient coupling the restriction discards.
struct RestrictedGenerator {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;  // block-diagonal for symmetric generators
    double discarded_coupling = 0.0;

    Matrix exponential(double angle) const {
        Vector phases(eigenvalues.size());
        for (Index i = 0; i < eigenvalues.size(); ++i) {
            phases[i] = std::exp(Complex(0.0, angle * eigenvalues[i]));
        }
        return eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
    }
};

std::vector<std::pair<int, int>> subspace_blocks(const ModelSpace& space, int K,
                                                 int subspace_dim) {
    std::vector<std::pair<int, int>> blocks;
    int pos = 0;
    for (int mu = 0; mu <= K; ++mu) {
        blocks.emplace_back(pos, space.sector_dims[mu]);
        pos += space.sector_dims[mu];
    }
    if (pos < subspace_dim) blocks.emplace_back(pos, subspace_dim - pos);
    return blocks;
}

RestrictedGenerator restrict_generator(const GeneratorSet& gens, const std::string& name,
                                       const ModelSpace& space, int K,
                                       const std::vector<int>& indices) {
    const int n = space.total_dim();
    const int m = static_cast<int>(indices.size());
    Matrix ambient;
    bool block_structured = true;
    if (name == "H0" || name == "identity") {
        if (!gens.includes_identity) {
            throw ConfigError("propagate: identity generator is not part of this set");
        }
        ambient = Matrix::Identity(n, n);
    } else if (const BlockOperator* op = gens.find_symmetric(name)) {
        ambient = embed(*op);
    } else if (gens.has_breaker() && name == gens.breaker_name) {
        ambient = gens.breaker;
        block_structured = false;
    } else {
        throw ConfigError("propagate: unknown generator name '" + name + "'");
    }

    RestrictedGenerator rg;
    std::vector<bool> in_sub(n, false);
    for (int i : indices) in_sub[i] = true;
    double coupling = 0.0;
    for (int c : indices) {
        for (int r = 0; r < n; ++r) {
            if (!in_sub[r]) coupling = std::max(coupling, std::abs(ambient(r, c)));
        }
    }
    rg.discarded_coupling = coupling;

    Matrix sub(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) sub(i, j) = ambient(indices[i], indices[j]);
    }

    rg.eigenvalues.resize(m);
    rg.eigenvectors = Matrix::Zero(m, m);
    if (block_structured) {
        for (auto [off, d] : subspace_blocks(space, K, m)) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(sub.block(off, off, d, d));
            rg.eigenvalues.segment(off, d) = es.eigenvalues();
            rg.eigenvectors.block(off, off, d, d) = es.eigenvectors();
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sub);
        rg.eigenvalues = es.eigenvalues();
        rg.eigenvectors = es.eigenvectors();
    }
    return rg;
}

}  // namespace

PropagationResult propagate(const ControlSchedule& schedule, const GeneratorSet& gens,
                            const ModelSpace& space, int K) {
    PropagationResult out;
    out.indices = propagation_indices(space, K);
    const int m = static_cast<int>(out.indices.size());
    out.unitary = Matrix::Identity(m, m);

    std::vector<std::pair<std::string, RestrictedGenerator>> cache;
    auto restricted = [&](const std::string& name) -> const RestrictedGenerator& {
        for (const auto& [n2, rg] : cache) {
            if (n2 == name) return rg;
        }
        cache.emplace_back(name, restrict_generator(gens, name, space, K, out.indices));
        return cache.back().second;
    };

    for (const auto& seg : schedule.segments) {
        if (seg.duration < 0) throw PreconditionError("propagate: negative segment duration");
        const RestrictedGenerator& rg = restricted(seg.generator);
        const double angle = seg.amplitude * seg.duration;
        out.unitary = rg.exponential(angle) * out.unitary;
        out.segment_leakage.push_back(rg.discarded_coupling * std::abs(angle));
    }
    if (max_abs(out.unitary.adjoint() * out.unitary - Matrix::Identity(m, m)) > 1e-9) {
        throw PreconditionError("propagate: propagator lost unitarity beyond 1e-9");
    }
    return out;
}

StrongErrorReport strong_error(const Matrix& u_target, const Matrix& u_actual,
                               const std::vector<Vector>& vectors, bool phase_free) {
    if (u_target.rows() != u_actual.rows() || u_target.cols() != u_actual.cols()) {
        throw DimensionError("strong_error: operator shapes differ");
    }
    StrongErrorReport rep;
    rep.vectors_used = static_cast<int>(vectors.size());
    Complex phase = 1.0;
    if (phase_free) {
        Complex acc = 0.0;
        for (const auto& v : vectors) {
            acc += (u_actual * v).dot(u_target * v);
        }
        if (std::abs(acc) > 0) phase = acc / std::abs(acc);
    }
    rep.max_error = 0.0;
    for (const auto& v : vectors) {
        if (v.size() != u_target.rows()) {
            throw DimensionError("strong_error: vector dimension mismatch");
        }
        if (std::abs(v.norm() - 1.0) > 1e-12) {
            throw PreconditionError("strong_error: vectors must be normalized");
        }
        double e = (u_target * v - phase * (u_actual * v)).norm();
        rep.per_vector_errors.push_back(e);
        rep.max_error = std::max(rep.max_error, e);
    }
    return rep;
}

namespace {

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// 1-D objective along one segment angle: S(t) = sum_l exp(-i t w_l) C_l,
// where C collects <U_k(t) f_j, b_j> over probes in the generator eigenframe.
struct AngleScan {
    const Eigen::VectorXd* w = nullptr;
    Vector coeff;

    double score(double t, bool phase_free) const {
        Complex s = 0.0;
        for (Index l = 0; l < coeff.size(); ++l) {
            s += std::exp(Complex(0.0, -t * (*w)[l])) * coeff[l];
        }
        return phase_free ? std::abs(s) : s.real();
    }

    // Newton steps on the stationarity of |S|^2 (resp. Re S); the derivatives
    // of the trigonometric polynomial are explicit.
    double polish(double t, bool phase_free) const {
        for (int it = 0; it < 12; ++it) {
            Complex s = 0.0, s1 = 0.0, s2 = 0.0;
            for (Index l = 0; l < coeff.size(); ++l) {
                const double wl = (*w)[l];
                Complex e = std::exp(Complex(0.0, -t * wl)) * coeff[l];
                s += e;
                s1 += Complex(0.0, -wl) * e;
                s2 += -wl * wl * e;
            }
            double g, h;
            if (phase_free) {
                g = 2.0 * (std::conj(s) * s1).real();
                h = 2.0 * (std::conj(s) * s2).real() + 2.0 * std::norm(s1);
            } else {
                g = s1.real();
                h = s2.real();
            }
            if (h >= 0.0) break;  // not at a local maximum basin
            double step = -g / h;
            t += step;
            if (std::abs(step) < 1e-15) break;
        }
        return t;
    }

    double best_angle(double current, bool phase_free) const {
        constexpr int kSamples = 257;
        constexpr double kRange = 2.0 * M_PI;
        double best_t = current;
        double best_s = score(current, phase_free);
        const double step = 2.0 * kRange / (kSamples - 1);
        for (int i = 0; i < kSamples; ++i) {
            double t = -kRange + i * step;
            double s = score(t, phase_free);
            if (s > best_s) {
                best_s = s;
                best_t = t;
            }
        }
        // golden-section refinement around the best sample, then Newton polish
        double a = best_t - step, b = best_t + step;
        constexpr double kGolden = 0.381966011250105;
        for (int it = 0; it < 40; ++it) {
            double t1 = a + kGolden * (b - a);
            double t2 = b - kGolden * (b - a);
            if (score(t1, phase_free) < score(t2, phase_free)) {
                a = t1;
            } else {
                b = t2;
            }
        }
        double refined = polish(0.5 * (a + b), phase_free);
        if (score(refined, phase_free) > best_s) best_t = refined;
        return best_t;
    }
};

struct Objective {
    // maximize sum of overlaps (phase-free modulus or fixed-phase real part)
    std::vector<Vector> start;    // source vectors on the subspace
    std::vector<Vector> targets;  // target vectors on the subspace
    bool phase_free = true;
};

struct CoordinateDescent {
    const std::vector<RestrictedGenerator>* gens = nullptr;
    std::vector<int> cycle;  // generator index per segment
    Objective obj;
    int max_passes = 50;

    // returns final angles; eval(angles) must return the true outer objective
    template <typename EvalFn>
    std::vector<double> run(std::vector<double> theta, double stop_below, EvalFn eval,
                            double* final_value) const {
        const int m = static_cast<int>(theta.size());
        const size_t f = obj.start.size();
        double cur = eval(theta);
        for (int pass = 0; pass < max_passes; ++pass) {
            // suffix stack: B[k] = (U_m ... U_{k+1})^dag t_j
            std::vector<std::vector<Vector>> B(m + 1);
            B[m] = obj.targets;
            for (int k = m - 1; k >= 0; --k) {
                Matrix u = (*gens)[cycle[k]].exponential(theta[k]);
                B[k].resize(f);
                for (size_t j = 0; j < f; ++j) B[k][j] = u.adjoint() * B[k + 1][j];
            }
            std::vector<Vector> F = obj.start;
            double moved = 0.0;
            for (int k = 0; k < m; ++k) {
                const RestrictedGenerator& g = (*gens)[cycle[k]];
                AngleScan scan;
                scan.w = &g.eigenvalues;
                scan.coeff = Vector::Zero(g.eigenvalues.size());
                for (size_t j = 0; j < f; ++j) {
                    Vector fl = g.eigenvectors.adjoint() * F[j];
                    Vector bl = g.eigenvectors.adjoint() * B[k + 1][j];
                    scan.coeff += fl.conjugate().cwiseProduct(bl);
                }
                double old_score = scan.score(theta[k], obj.phase_free);
                double cand = scan.best_angle(theta[k], obj.phase_free);
                if (scan.score(cand, obj.phase_free) > old_score) {
                    moved += std::abs(cand - theta[k]);
                    theta[k] = cand;
                }
                Matrix u = g.exponential(theta[k]);
                for (size_t j = 0; j < f; ++j) F[j] = u * F[j];
            }
            cur = eval(theta);
            if (cur < stop_below || moved < 1e-11) break;
        }
        *final_value = cur;
        return theta;
    }
};

ControlSchedule schedule_from_angles(const std::vector<double>& theta,
                                     const std::vector<std::string>& names,
                                     const std::vector<int>& cycle) {
    ControlSchedule s;
    for (size_t k = 0; k < theta.size(); ++k) {
        if (std::abs(theta[k]) < 1e-14) continue;  // prune idle segments
        Segment seg;
        seg.generator = names[cycle[k]];
        seg.duration = std::abs(theta[k]);
        seg.amplitude = theta[k] >= 0 ? 1.0 : -1.0;
        s.segments.push_back(std::move(seg));
    }
    return s;
}

struct SynthesisSetup {
    std::vector<int> indices;
    std::vector<std::string> names;
    std::vector<RestrictedGenerator> restricted;
    std::vector<int> cycle;
};

SynthesisSetup make_setup(const GeneratorSet& gens, const ModelSpace& space, int K,
                          int budget) {
    if (gens.symmetric.empty() && !gens.has_breaker()) {
        throw ConfigError("synthesis: empty generator set");
    }
    SynthesisSetup su;
    su.indices = propagation_indices(space, K);
    if (gens.has_breaker()) su.names.push_back(gens.breaker_name);
    for (const auto& [n, op] : gens.symmetric) {
        (void)op;
        su.names.push_back(n);
    }
    if (gens.includes_identity) su.names.push_back("H0");
    for (const auto& n : su.names) {
        su.restricted.push_back(restrict_generator(gens, n, space, K, su.indices));
    }
    for (int k = 0; k < budget; ++k) {
        su.cycle.push_back(k % static_cast<int>(su.names.size()));
    }
    return su;
}

Vector subspace_vector(const Vector& v, const std::vector<int>& indices, int ambient_dim) {
    if (v.size() == static_cast<Index>(indices.size())) return v;
    if (v.size() != ambient_dim) {
        throw DimensionError("synthesis: vector matches neither ambient nor subspace");
    }
    Vector w(indices.size());
    double mass = 0.0;
    for (size_t i = 0; i < indices.size(); ++i) {
        w[i] = v[indices[i]];
        mass += std::norm(w[i]);
    }
    if (std::abs(mass - v.squaredNorm()) > 1e-12) {
        throw PreconditionError("synthesis: vector has support outside the truncation");
    }
    return w;
}

}  // namespace

SynthesisResult synthesize_unitary(const Matrix& target, const GeneratorSet& gens,
                                   const ModelSpace& space, int K,
                                   const std::vector<Vector>& vectors, double eps, int budget,
                                   const SynthesisOptions& opts) {
    if (eps <= 0) throw ConfigError("synthesize_unitary: eps must be positive");
    if (budget < 1) throw ConfigError("synthesize_unitary: budget must be >= 1");
    SynthesisSetup su = make_setup(gens, space, K, budget);
    const int m = static_cast<int>(su.indices.size());
    if (target.rows() != m || target.cols() != m) {
        throw DimensionError("synthesize_unitary: target does not match the truncation");
    }

    Objective obj;
    obj.phase_free = opts.phase_free;
    for (const auto& v : vectors) {
        Vector w = subspace_vector(v, su.indices, space.total_dim());
        obj.start.push_back(w);
        obj.targets.push_back(target * w);
    }
    if (obj.start.empty()) throw ConfigError("synthesize_unitary: no probe vectors");

    CoordinateDescent cd;
    cd.gens = &su.restricted;
    cd.cycle = su.cycle;
    cd.obj = obj;
    cd.max_passes = opts.max_passes;

    auto eval = [&](const std::vector<double>& theta) {
        Matrix u = Matrix::Identity(m, m);
        for (size_t k = 0; k < theta.size(); ++k) {
            u = su.restricted[su.cycle[k]].exponential(theta[k]) * u;
        }
        return strong_error(target, u, obj.start, opts.phase_free).max_error;
    };

    double best_err = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        std::mt19937_64 eng(opts.seed + 0x9E3779B97F4A7C15ULL * (r + 1));
        std::vector<double> theta(budget);
        for (auto& t : theta) t = -0.6 + 1.2 * uniform01(eng);
        double val = 0.0;
        theta = cd.run(theta, 0.5 * eps, eval, &val);
        if (val < best_err) {
            best_err = val;
            best_theta = theta;
        }
        if (best_err < 0.5 * eps) break;
    }

    SynthesisResult res;
    res.schedule = schedule_from_angles(best_theta, su.names, su.cycle);
    PropagationResult prop = propagate(res.schedule, gens, space, K);
    res.report = strong_error(target, prop.unitary, obj.start, opts.phase_free);
    res.best_objective = res.report.max_error;
    res.success = res.report.max_error < eps;
    res.segment_leakage = prop.segment_leakage;
    return res;
}

ReachResult reach_state(const Vector& psi0, const Vector& psi_target, const GeneratorSet& gens,
                        const ModelSpace& space, int K, double eps, int budget,
                        const SynthesisOptions& opts) {
    if (eps <= 0) throw ConfigError("reach_state: eps must be positive");
    SynthesisSetup su = make_setup(gens, space, K, budget);

    Vector a = subspace_vector(psi0, su.indices, space.total_dim());
    Vector b = subspace_vector(psi_target, su.indices, space.total_dim());
    if (std::abs(a.norm() - 1.0) > 1e-12 || std::abs(b.norm() - 1.0) > 1e-12) {
        throw PreconditionError("reach_state: states must be unit vectors");
    }

    ReachResult res;
    double initial_overlap = std::abs(b.dot(a));
    if (1.0 - initial_overlap * initial_overlap < eps * eps) {
        res.overlap = initial_overlap;
        res.infidelity = 1.0 - initial_overlap * initial_overlap;
        res.success = true;
        return res;  // empty schedule
    }

    Objective obj;
    obj.phase_free = true;  // overlap modulus is phase-insensitive
    obj.start = {a};
    obj.targets = {b};

    CoordinateDescent cd;
    cd.gens = &su.restricted;
    cd.cycle = su.cycle;
    cd.obj = obj;
    cd.max_passes = opts.max_passes;

    auto eval = [&](const std::vector<double>& theta) {
        Vector v = a;
        for (size_t k = 0; k < theta.size(); ++k) {
            v = su.restricted[su.cycle[k]].exponential(theta[k]) * v;
        }
        double ovl = std::abs(b.dot(v));
        return 1.0 - ovl * ovl;  // infidelity
    };

    double best_inf = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        std::mt19937_64 eng(opts.seed + 0x9E3779B97F4A7C15ULL * (r + 1));
        std::vector<double> theta(budget);
        for (auto& t : theta) t = -0.6 + 1.2 * uniform01(eng);
        double val = 0.0;
        theta = cd.run(theta, 0.5 * eps * eps, eval, &val);
        if (val < best_inf) {
            best_inf = val;
            best_theta = theta;
        }
        if (best_inf < 0.5 * eps * eps) break;
    }

    res.schedule = schedule_from_angles(best_theta, su.names, su.cycle);
    PropagationResult prop = propagate(res.schedule, gens, space, K);
    res.overlap = std::abs(b.dot(prop.unitary * a));
    res.infidelity = 1.0 - res.overlap * res.overlap;
    res.success = res.infidelity < eps * eps;
    return res;
}

}  // namespace cavlie::ctrl

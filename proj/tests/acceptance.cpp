// Acceptance suite: one pass/fail line per criterion; exit code = number of
// failed criteria.
#include "cavlie/control.hpp"
#include "cavlie/identities.hpp"
#include "cavlie/lie_engine.hpp"
#include "cavlie/symmetry.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace cavlie;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool()>& body) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    bool ok = false;
    std::string error;
    try {
        ok = body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number,
                label.c_str(), secs, error.empty() ? "" : " error: ", error.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double unif(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& eng) {
    double u1 = std::max(unif(eng), 1e-300), u2 = unif(eng);
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
}

Vector random_unit(int n, std::mt19937_64& eng) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(gaussian(eng), gaussian(eng));
    return v / v.norm();
}

std::vector<Matrix> symmetric_embedded(const GeneratorSet& g, int K,
                                       const std::vector<std::string>& names) {
    std::vector<BlockOperator> hs;
    for (const auto& n : names) hs.push_back(*g.find_symmetric(n));
    return lie::embedded_generators(hs, K);
}

Matrix restrict_to(const Matrix& a, const std::vector<int>& idx) {
    Matrix out(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        for (size_t j = 0; j < idx.size(); ++j) out(i, j) = a(idx[i], idx[j]);
    }
    return out;
}

lie::LieBasis broken_closure(ModelKind kind, int atoms, int K,
                             const std::vector<std::string>& sym_names, int* dim_out) {
    ModelSpace sp = build_space(kind, atoms, K);
    GeneratorSet g = model_generators(sp);
    auto split = ladder_split(sp);
    auto fidx = sym::f_space_indices(sp, *split, K);
    const int m = static_cast<int>(fidx.size());
    std::vector<Matrix> gens = {Complex(0, 1) * Matrix::Identity(m, m)};
    for (const auto& n : sym_names) {
        gens.push_back(Complex(0, 1) * restrict_to(embed(*g.find_symmetric(n)), fidx));
    }
    gens.push_back(Complex(0, 1) * restrict_to(g.breaker, fidx));
    *dim_out = m;
    return lie::closure(gens);
}

bool within(double secs, double bound) { return secs < bound; }

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;

    criterion(1, "single-atom symmetric closure: dim 3K, sectors [0,3,...], K=2..6", [] {
        for (int K = 2; K <= 6; ++K) {
            auto t0 = clock::now();
            ModelSpace sp = build_space(ModelKind::JC, 1, K);
            GeneratorSet g = jc_generators(sp);
            lie::LieBasis basis =
                lie::closure(symmetric_embedded(g, K, {"H_JC,1", "H_JC,2"}), 1e-9);
            if (basis.dimension() != 3 * K) return false;
            auto sectors = lie::project_per_sector(basis, sp, K);
            for (int mu = 0; mu <= K; ++mu) {
                if (sectors[mu] != (mu == 0 ? 0 : 3)) return false;
            }
            double secs = std::chrono::duration<double>(clock::now() - t0).count();
            if (!within(secs, 10.0)) return false;
        }
        return true;
    });

    criterion(2, "single-atom drift adds exactly one central direction, K=2..6", [] {
        for (int K = 2; K <= 6; ++K) {
            ModelSpace sp = build_space(ModelKind::JC, 1, K);
            GeneratorSet g = jc_generators(sp);
            int with = lie::closure(symmetric_embedded(g, K, {"H_JC,1", "H_JC,2", "H_JC,3"}))
                           .dimension();
            if (with != 3 * K + 1) return false;
        }
        return true;
    });

    criterion(3, "single-atom broken symmetry: full unitary algebra on H_[K], K=2..4", [] {
        for (int K : {2, 3, 4}) {
            auto t0 = clock::now();
            int m = 0;
            lie::LieBasis basis =
                broken_closure(ModelKind::JC, 1, K, {"H_JC,1", "H_JC,2"}, &m);
            if (m != 2 * K + 2) return false;
            if (basis.dimension() != m * m) return false;
            if (lie::classify_full(basis, m) != lie::Classification::FULL_UNITARY) {
                return false;
            }
            double secs = std::chrono::duration<double>(clock::now() - t0).count();
            if (K == 4 && !within(secs, 60.0)) return false;
        }
        return true;
    });

    criterion(4, "individual control M=2: su dimensions 23/38 and full unitary on H_[K]", [] {
        const int want_su[] = {23, 38};
        for (int K : {2, 3}) {
            ModelSpace sp = build_space(ModelKind::IC, 2, K);
            GeneratorSet g = ic_generators(sp);
            std::vector<std::string> names = {"H_IC,1", "H_IC,2", "H_IC,3", "H_IC,4"};
            lie::LieBasis basis = lie::closure(symmetric_embedded(g, K, names));
            auto verdict = lie::compare_to_su(basis, sp, K);
            if (verdict.su_reduced_dim != want_su[K - 2]) return false;
            if (verdict.classification != lie::Classification::FULL_SU_X) return false;
            int m = 0;
            lie::LieBasis full = broken_closure(ModelKind::IC, 2, K, names, &m);
            if (full.dimension() != m * m) return false;
            if (lie::classify_full(full, m) != lie::Classification::FULL_UNITARY) {
                return false;
            }
        }
        return true;
    });

    criterion(5, "collective control M=2 K=4: full u per sector, golden global deficit 3", [] {
        ModelSpace sp = build_space(ModelKind::TC, 2, 4);
        GeneratorSet g = tc_generators(sp);
        lie::LieBasis basis =
            lie::closure(symmetric_embedded(g, 4, {"H_TC,1", "H_TC,2", "H_TC,3"}));
        auto verdict = lie::compare_to_su(basis, sp, 4);
        if (verdict.per_sector_dims != std::vector<int>{1, 4, 9, 9, 9}) return false;
        long sum_sq = 32;
        if (verdict.global_dim >= sum_sq) return false;
        if (sum_sq - verdict.global_dim != 3) return false;  // golden deficit
        return verdict.classification == lie::Classification::PROPER_SUBALGEBRA;
    });

    criterion(6, "extended collective M=2 K=4: su + 2 central; full unitary on H_[4]", [] {
        ModelSpace sp = build_space(ModelKind::CC, 2, 4);
        GeneratorSet g = cc_generators(sp);
        std::vector<std::string> names = {"H_CC,1", "H_CC,2", "H_CC,3"};
        lie::LieBasis basis = lie::closure(symmetric_embedded(g, 4, names));
        auto verdict = lie::compare_to_su(basis, sp, 4);
        if (verdict.su_reduced_dim != 27) return false;
        if (verdict.global_dim != 27 + verdict.center_dim) return false;
        if (verdict.classification != lie::Classification::FULL_SU_X) return false;
        int m = 0;
        lie::LieBasis full = broken_closure(ModelKind::CC, 2, 4, names, &m);
        if (m != 13 || full.dimension() != 169) return false;
        return lie::classify_full(full, m) == lie::Classification::FULL_UNITARY;
    });

    criterion(7, "identity suite across models, residuals below 1e-10", [] {
        auto t0 = clock::now();
        std::vector<ModelSpace> spaces;
        spaces.push_back(build_space(ModelKind::JC, 1, 8));
        spaces.push_back(build_space(ModelKind::IC, 2, 8));
        spaces.push_back(build_space(ModelKind::IC, 3, 6));
        for (int M : {2, 3}) {
            spaces.push_back(build_space(ModelKind::TC, M, 8));
            spaces.push_back(build_space(ModelKind::CC, M, 8));
        }
        for (const auto& sp : spaces) {
            for (const auto& r : identities::run_suite(sp, 1e-10)) {
                if (!r.pass) {
                    std::printf("        identity %s residual %.3e exceeds %.1e\n",
                                r.name.c_str(), r.max_residual, r.tolerance);
                    return false;
                }
            }
        }
        double secs = std::chrono::duration<double>(clock::now() - t0).count();
        return within(secs, 30.0);
    });

    criterion(8, "complementarity verdicts and the charge-conserving negative", [] {
        {
            ModelSpace sp = build_space(ModelKind::JC, 1, 5);
            auto rep = sym::check_complementarity(jc_generators(sp).breaker, sp,
                                                  *declared_split(sp), 1e-10);
            if (!rep.verdict || rep.orientation != "as-given") return false;
        }
        for (int M : {2, 3}) {
            ModelSpace sp = build_space(ModelKind::IC, M, 4);
            auto rep = sym::check_complementarity(ic_generators(sp).breaker, sp,
                                                  *declared_split(sp), 1e-10);
            if (!rep.verdict || rep.orientation != "as-given") return false;
        }
        {
            ModelSpace sp = build_space(ModelKind::CC, 2, 4);
            auto rep = sym::check_complementarity(cc_generators(sp).breaker, sp,
                                                  *declared_split(sp), 1e-10);
            if (!rep.verdict || rep.orientation != "swapped") return false;
        }
        {
            ModelSpace sp = build_space(ModelKind::JC, 1, 5);
            GeneratorSet g = jc_generators(sp);
            auto rep = sym::check_complementarity(embed(*g.find_symmetric("H_JC,2")), sp,
                                                  *declared_split(sp), 1e-10);
            if (rep.ladder_ok || rep.verdict) return false;
        }
        return true;
    });

    criterion(9, "orbit ranks: 2n-1 with the breaker; 2d-1 within one sector", [] {
        int m = 0;
        lie::LieBasis full = broken_closure(ModelKind::JC, 1, 3, {"H_JC,1", "H_JC,2"}, &m);
        std::mt19937_64 eng(2024);
        for (int t = 0; t < 5; ++t) {
            if (lie::orbit_rank(full, random_unit(m, eng)) != 2 * m - 1) return false;
        }
        ModelSpace sp = build_space(ModelKind::JC, 1, 3);
        GeneratorSet g = jc_generators(sp);
        lie::LieBasis sym_basis =
            lie::closure(symmetric_embedded(g, 3, {"H_JC,1", "H_JC,2"}));
        Vector psi = Vector::Zero(sp.offsets[4]);
        psi[sp.index_of(2, 0)] = 1.0;
        std::vector<int> mask = {sp.offsets[2], sp.offsets[2] + 1};
        return lie::orbit_rank_masked(sym_basis, psi, mask) == 2 * sp.sector_dims[2] - 1;
    });

    criterion(10, "polar truncation: probe errors finite and non-increasing, K=3..5", [] {
        ModelSpace sp = build_space(ModelKind::JC, 1, 6);
        auto split = ladder_split(sp);
        GeneratorSet g = jc_generators(sp);
        const int n = sp.total_dim();
        Matrix u = expm_skew(g.breaker, 0.3);
        std::vector<Vector> probes;
        for (int i : sym::f_space_indices(sp, *split, 2)) {
            Vector v = Vector::Zero(n);
            v[i] = 1.0;
            probes.push_back(v);
        }
        double prev = -1.0;
        for (int K : {3, 4, 5}) {
            auto pt = sym::polar_truncate(u, sp, K, *split, probes);
            double worst = 0.0;
            for (double e : pt.probe_errors) {
                if (!std::isfinite(e)) return false;
                worst = std::max(worst, e);
            }
            if (prev >= 0.0 && worst > prev + 1e-12) return false;
            prev = worst;
            auto fidx = sym::f_space_indices(sp, *split, K);
            Matrix p = sym::projector(fidx, n);
            if (max_abs(pt.partial_isometry.adjoint() * pt.partial_isometry - p) > 1e-10) {
                return false;
            }
            if (max_abs(pt.partial_isometry * pt.partial_isometry.adjoint() - p) > 1e-10) {
                return false;
            }
        }
        return true;
    });

    criterion(11, "schedule synthesis: state transfer and a random unitary target", [] {
        auto t0 = clock::now();
        ModelSpace sp = build_space(ModelKind::JC, 1, 2);
        GeneratorSet g = jc_generators(sp);
        const int n = sp.total_dim();

        Vector psi0 = Vector::Zero(n), psi1 = Vector::Zero(n);
        psi0[sp.index_of(0, 0)] = 1.0;
        psi1[sp.index_of(1, 0)] = 1.0;
        ctrl::SynthesisOptions opts;
        opts.seed = 7;
        opts.restarts = 3;
        auto reach = ctrl::reach_state(psi0, psi1, g, sp, 2, 1e-2, 100, opts);
        if (!reach.success || reach.infidelity >= 1e-4) return false;

        auto idx = ctrl::propagation_indices(sp, 2);
        const int m = static_cast<int>(idx.size());
        std::mt19937_64 eng(11);
        Matrix a(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) a(i, j) = Complex(gaussian(eng), gaussian(eng));
        }
        Eigen::HouseholderQR<Matrix> qr(a);
        Matrix target = qr.householderQ();
        Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < m; ++j) {
            Complex d = r(j, j);
            target.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0));
        }
        std::vector<Vector> probes;
        for (int i = 0; i < 3; ++i) probes.push_back(random_unit(m, eng));
        ctrl::SynthesisOptions uo;
        uo.seed = 11;
        uo.restarts = 5;
        auto synth = ctrl::synthesize_unitary(target, g, sp, 2, probes, 1e-2, 200, uo);
        if (!synth.success || synth.report.max_error >= 1e-2) return false;

        auto synth2 = ctrl::synthesize_unitary(target, g, sp, 2, probes, 1e-2, 200, uo);
        if (synth2.schedule.segments.size() != synth.schedule.segments.size()) return false;
        for (size_t i = 0; i < synth.schedule.segments.size(); ++i) {
            if (synth.schedule.segments[i].duration != synth2.schedule.segments[i].duration)
                return false;
        }
        double secs = std::chrono::duration<double>(clock::now() - t0).count();
        return within(secs, 300.0);
    });

    criterion(12, "charge conservation blocks cross-sector transfer exactly", [] {
        ModelSpace sp = build_space(ModelKind::JC, 1, 3);
        GeneratorSet all = jc_generators(sp);
        GeneratorSet sym;
        sym.symmetric = {{"H_JC,1", *all.find_symmetric("H_JC,1")},
                         {"H_JC,2", *all.find_symmetric("H_JC,2")}};
        sym.includes_identity = false;
        const int n = sp.total_dim();
        Vector a = Vector::Zero(n), b = Vector::Zero(n);
        a[sp.index_of(1, 0)] = 1.0;
        b[sp.index_of(2, 0)] = 1.0;
        ctrl::SynthesisOptions opts;
        opts.seed = 3;
        opts.restarts = 2;
        opts.max_passes = 10;
        auto res = ctrl::reach_state(a, b, sym, sp, 3, 1e-3, 60, opts);
        double initial = 0.0;  // the two states are orthogonal
        return res.overlap - initial < 1e-12;
    });

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures;
}

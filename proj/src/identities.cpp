#include "cavlie/identities.hpp"

#include "cavlie/lie_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace cavlie::identities {

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

struct SuiteBuilder {
    std::vector<IdentityResult> results;
    double tolerance;

    void add(const std::string& name, double residual, double bound = -1.0) {
        IdentityResult r;
        r.name = name;
        r.max_residual = residual;
        r.tolerance = bound > 0 ? bound : tolerance;
        r.pass = residual <= r.tolerance;
        results.push_back(std::move(r));
    }
};

int popcount(int b) { return std::popcount(static_cast<unsigned>(b)); }

// --- independent tensor-product construction routes -------------------------

void add_pair(Matrix& h, int i, int j, double amp) {
    if (i < 0 || j < 0) return;
    h(i, j) += amp;
    h(j, i) += amp;
}

}  // namespace

Matrix tensor_route_jc(const ModelSpace& space, int which) {
    const int n = space.total_dim();
    Matrix h = Matrix::Zero(n, n);
    // atom level nu and photon number n_ph enumerate the stored basis
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        for (int nu : space.labels[mu]) {
            const int idx = space.index_of(mu, nu);
            const int n_ph = mu - nu;
            switch (which) {
                case 1:  // (sigma_3 x 1)/2, ground level at -1
                    h(idx, idx) = (2 * nu - 1) / 2.0;
                    break;
                case 2:  // sigma_+ x a + sigma_- x a*
                    if (nu == 0 && n_ph >= 1) {
                        add_pair(h, space.index_of(mu, 1), idx, std::sqrt(double(n_ph)));
                    }
                    break;
                case 3:  // 1 x N
                    h(idx, idx) = n_ph;
                    break;
                case 4:  // sigma_1 x 1
                    if (nu == 0) {
                        add_pair(h, space.index_of(mu + 1, 1), idx, 1.0);
                    }
                    break;
                default:
                    throw ConfigError("tensor_route_jc: which out of range");
            }
        }
    }
    return h;
}

Matrix tensor_route_ic(const ModelSpace& space, int which) {
    const int M = space.atoms;
    const int n = space.total_dim();
    Matrix h = Matrix::Zero(n, n);
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        for (int b : space.labels[mu]) {
            const int idx = space.index_of(mu, b);
            const int n_ph = mu - popcount(b);
            if (which >= 1 && which <= M) {
                h(idx, idx) = (b >> (M - which)) & 1;
            } else if (which <= 2 * M) {
                const int j = which - M;
                if (!((b >> (M - j)) & 1) && n_ph >= 1) {
                    add_pair(h, space.index_of(mu, b | (1 << (M - j))), idx,
                             std::sqrt(double(n_ph)));
                }
            } else if (which == 2 * M + 1) {
                if (!((b >> (M - 1)) & 1)) {
                    add_pair(h, space.index_of(mu + 1, b | (1 << (M - 1))), idx, 1.0);
                }
            } else {
                throw ConfigError("tensor_route_ic: which out of range");
            }
        }
    }
    return h;
}

Matrix tensor_route_collective(const ModelSpace& space, int which) {
    const int M = space.atoms;
    const int n = space.total_dim();
    Matrix h = Matrix::Zero(n, n);
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        for (int nu : space.labels[mu]) {
            const int idx = space.index_of(mu, nu);
            const int n_ph = mu - nu;
            switch (which) {
                case 1:  // collective level operator, spin convention
                    h(idx, idx) = nu - M / 2.0;
                    break;
                case 2:  // S_+ x a + S_- x a*, pseudo-spin M/2 ladder
                    if (nu < M && n_ph >= 1) {
                        double amp = std::sqrt(double(nu + 1) * double(M - nu) * double(n_ph));
                        add_pair(h, space.index_of(mu, nu + 1), idx, amp);
                    }
                    break;
                case 3:  // 1 x N
                    h(idx, idx) = n_ph;
                    break;
                case 4:  // (|0><1| + |1><0|) x 1
                    if (nu == 0) {
                        add_pair(h, space.index_of(mu + 1, 1), idx, 1.0);
                    }
                    break;
                default:
                    throw ConfigError("tensor_route_collective: which out of range");
            }
        }
    }
    return h;
}

namespace {

// --- shared structural checks ------------------------------------------------

double sector_shift_violation(const Matrix& h, const ModelSpace& space) {
    double worst = 0.0;
    for (int i = 0; i < space.total_dim(); ++i) {
        for (int j = 0; j < space.total_dim(); ++j) {
            if (std::abs(h(i, j)) == 0.0) continue;
            int d = std::abs(space.sector_of(i) - space.sector_of(j));
            if (d != 1) worst = std::max(worst, std::abs(h(i, j)));
        }
    }
    return worst;
}

void structural_checks(SuiteBuilder& sb, const ModelSpace& space, const GeneratorSet& g) {
    Matrix x = embed(charge_operator(space));
    double worst = 0.0;
    for (const auto& [name, op] : g.symmetric) {
        (void)name;
        worst = std::max(worst, max_abs(commutator(embed(op), x)));
    }
    sb.add("charge_commutation", worst);
    double herm = 0.0;
    for (const auto& [name, op] : g.symmetric) {
        (void)name;
        for (const auto& b : op.blocks) herm = std::max(herm, max_abs(b - b.adjoint()));
    }
    sb.add("symmetric_hermiticity", herm, tol::structural);
    if (g.has_breaker()) {
        sb.add("breaker_hermiticity", max_abs(g.breaker - g.breaker.adjoint()),
               tol::structural);
        sb.add("breaker_sector_shift", sector_shift_violation(g.breaker, space));
    }
}

// --- single-atom suite -------------------------------------------------------

Matrix varsig(int alpha) {
    Matrix s(2, 2);
    switch (alpha) {
        case 0: s << 1, 0, 0, 1; break;
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

void jc_suite(SuiteBuilder& sb, const ModelSpace& space) {
    GeneratorSet g = jc_generators(space);
    structural_checks(sb, space, g);

    // ladder family commutation relations, k + l <= 4
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
        for (int l = 0; k + l <= 4; ++l) {
            BlockOperator a1k = a_alpha_k(space, 1, k);
            BlockOperator a2l = a_alpha_k(space, 2, l);
            BlockOperator a3k = a_alpha_k(space, 3, k);
            BlockOperator a1l = a_alpha_k(space, 1, l);
            BlockOperator a2k = a_alpha_k(space, 2, k);
            BlockOperator a3l = a_alpha_k(space, 3, l);
            BlockOperator r1 = a_alpha_k(space, 3, k + l + 1);
            BlockOperator r2 = a_alpha_k(space, 2, k + l);
            BlockOperator r3 = a_alpha_k(space, 1, k + l);
            for (int mu = 0; mu < space.stored_sectors(); ++mu) {
                const Complex two_i(0, 2);
                worst = std::max(worst, max_abs(commutator(a1k.blocks[mu], a2l.blocks[mu]) -
                                                two_i * r1.blocks[mu]));
                worst = std::max(worst, max_abs(commutator(a3k.blocks[mu], a1l.blocks[mu]) -
                                                two_i * r2.blocks[mu]));
                worst = std::max(worst, max_abs(commutator(a2k.blocks[mu], a3l.blocks[mu]) -
                                                two_i * r3.blocks[mu]));
            }
        }
    }
    sb.add("pauli_ladder_commutators", worst);

    // generator expressions in the ladder family (identity-like factors vanish
    // in the empty sector, matching the family's convention there)
    const BlockOperator* h1 = g.find_symmetric("H_JC,1");
    const BlockOperator* h2 = g.find_symmetric("H_JC,2");
    const BlockOperator* h3 = g.find_symmetric("H_JC,3");
    BlockOperator a30 = a_alpha_k(space, 3, 0);
    BlockOperator a10 = a_alpha_k(space, 1, 0);
    worst = 0.0;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        Matrix one = mu == 0 ? Matrix::Zero(1, 1) : varsig(0);
        worst = std::max(worst, max_abs(h1->blocks[mu] + a30.blocks[mu] / 2.0));
        worst = std::max(worst, max_abs(h2->blocks[mu] - a10.blocks[mu]));
        Matrix rhs = double(mu) * one + (one - a30.blocks[mu]) / 2.0;
        worst = std::max(worst, max_abs(h3->blocks[mu] - rhs));
    }
    sb.add("generator_ladder_relations", worst);

    // sector forms of the generators for mu >= 1
    worst = 0.0;
    for (int mu = 1; mu < space.stored_sectors(); ++mu) {
        worst = std::max(worst, max_abs(h1->blocks[mu] + varsig(3) / 2.0));
        worst = std::max(worst,
                         max_abs(h2->blocks[mu] - std::sqrt(double(mu)) * varsig(1)));
        worst = std::max(worst, max_abs(h3->blocks[mu] - ((mu + 0.5) * varsig(0) -
                                                          varsig(3) / 2.0)));
    }
    sb.add("single_atom_sector_forms", worst);

    // tensor-product route (coupling and breaker agree exactly; the level
    // operator agrees up to its empty-sector convention)
    Matrix h1t = tensor_route_jc(space, 1);
    h1t(0, 0) = 0.0;  // generator convention: empty sector vanishes
    worst = max_abs(embed(*h1) - h1t);
    worst = std::max(worst, max_abs(embed(*h2) - tensor_route_jc(space, 2)));
    worst = std::max(worst, max_abs(g.breaker - tensor_route_jc(space, 4)));
    sb.add("single_atom_tensor_route", worst);

    // breaker action on the one-excitation pair
    Vector e = Vector::Zero(space.total_dim());
    e[space.index_of(1, 1)] = 1.0;
    Vector want = Vector::Zero(space.total_dim());
    want[space.index_of(0, 0)] = 1.0;
    sb.add("breaker_pair_action", (g.breaker * e - want).norm());
}

// --- individual-control suite ------------------------------------------------

void ic_suite(SuiteBuilder& sb, const ModelSpace& space) {
    GeneratorSet g = ic_generators(space);
    structural_checks(sb, space, g);
    const int M = space.atoms;
    double worst = 0.0;
    for (int j = 1; j <= 2 * M; ++j) {
        const BlockOperator* op = g.find_symmetric("H_IC," + std::to_string(j));
        worst = std::max(worst, max_abs(embed(*op) - tensor_route_ic(space, j)));
    }
    worst = std::max(worst, max_abs(g.breaker - tensor_route_ic(space, 2 * M + 1)));
    sb.add("individual_tensor_route", worst);
}

// --- collective suites ---------------------------------------------------------

void collective_suite(SuiteBuilder& sb, const ModelSpace& space, double tolerance) {
    const int M = space.atoms;
    const bool cc = space.kind == ModelKind::CC;
    GeneratorSet g = cc ? cc_generators(space) : tc_generators(space);
    structural_checks(sb, space, g);

    BlockOperator y3 = y3_operator(space);
    BlockOperator yp = y_plus(space);
    BlockOperator ym = y_minus(space);

    // exchange generator: ladder-factor route and tensor route
    const std::string exname = cc ? "H_CC," + std::to_string(M + 1) : "H_TC,2";
    const BlockOperator* ex = g.find_symmetric(exname);
    double worst = 0.0;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix f = Matrix::Zero(d, d);
        for (int nu = 0; nu < d; ++nu) {
            f(nu, nu) = collective_ladder_factor(M, mu, nu);
        }
        Matrix route = f * yp.blocks[mu] + ym.blocks[mu] * f;
        worst = std::max(worst, max_abs(ex->blocks[mu] - route));
    }
    worst = std::max(worst, max_abs(embed(*ex) - tensor_route_collective(space, 2)));
    sb.add("exchange_factorization", worst);

    if (!cc) {
        const BlockOperator* h1 = g.find_symmetric("H_TC,1");
        const BlockOperator* h3 = g.find_symmetric("H_TC,3");
        double w = max_abs(embed(*h1) - tensor_route_collective(space, 1));
        w = std::max(w, max_abs(embed(*h3) - tensor_route_collective(space, 3)));
        sb.add("collective_tensor_route", w);
    } else {
        sb.add("collective_tensor_route",
               max_abs(g.breaker - tensor_route_collective(space, 4)));
    }

    // step-operator projector products
    worst = 0.0;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix lo = Matrix::Zero(d, d), hi = Matrix::Zero(d, d);
        lo(0, 0) = 1.0;
        hi(d - 1, d - 1) = 1.0;
        Matrix one = Matrix::Identity(d, d);
        worst = std::max(worst, max_abs(yp.blocks[mu] * ym.blocks[mu] - (one - lo)));
        worst = std::max(worst, max_abs(ym.blocks[mu] * yp.blocks[mu] - (one - hi)));
    }
    sb.add("step_projector_products", worst);

    // commuting step operators through functions of the level operator
    worst = 0.0;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix one = Matrix::Identity(d, d);
        for (int p = 0; p <= 4; ++p) {
            auto powm = [&](const Matrix& m) {
                Matrix r = one;
                for (int q = 0; q < p; ++q) r = r * m;
                return r;
            };
            Matrix gy = powm(y3.blocks[mu]);
            Matrix gm = powm(y3.blocks[mu] - one);
            Matrix gp = powm(y3.blocks[mu] + one);
            worst = std::max(worst, max_abs(yp.blocks[mu] * gy - gm * yp.blocks[mu]));
            worst = std::max(worst, max_abs(ym.blocks[mu] * gy - gp * ym.blocks[mu]));
        }
    }
    sb.add("step_function_shift", worst);

    // weighted-ladder commutators (lowering), two routes per block
    double worst_poly = 0.0, worst_f2 = 0.0;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix one = Matrix::Identity(d, d);
        Matrix hp = Matrix::Zero(d, d);
        for (int nu = 0; nu + 1 < d; ++nu) {
            hp(nu + 1, nu) = collective_ladder_factor(M, mu, nu + 1);
        }
        Matrix hm = hp.adjoint();
        Matrix f2 = Matrix::Zero(d, d), f2s = Matrix::Zero(d, d);
        for (int nu = 0; nu < d; ++nu) {
            f2(nu, nu) = (mu + 1.0 - nu) * (M + 1.0 - nu) * nu;
            f2s(nu, nu) = (mu - nu) * double(M - nu) * (nu + 1.0);
        }
        auto matpow = [&](const Matrix& m, int p) {
            Matrix r = one;
            for (int q = 0; q < p; ++q) r = r * m;
            return r;
        };
        for (int nn = 1; nn <= 3; ++nn) {
            Matrix y3n1 = matpow(y3.blocks[mu], nn - 1);
            Matrix lhs = y3n1 * hp * hm - hm * y3n1 * hp;
            Matrix rhs_f = y3n1 * f2 - f2s * matpow(y3.blocks[mu] + one, nn - 1);
            Matrix s = Matrix::Zero(d, d);
            for (int k = 0; k < nn; ++k) {
                s += double(binom(nn, k)) * matpow(y3.blocks[mu], k);
            }
            Matrix y3n = matpow(y3.blocks[mu], nn);
            Matrix x = double(mu) * one;
            Matrix rhs_p = (x - y3.blocks[mu]) * y3n +
                           ((M + 1.0) * one - y3.blocks[mu]) * y3n -
                           (x - y3.blocks[mu]) * (double(M) * one - y3.blocks[mu]) * s;
            worst_f2 = std::max(worst_f2, max_abs(lhs - rhs_f));
            worst_poly = std::max(worst_poly, max_abs(lhs - rhs_p));
        }
    }
    sb.add("weighted_ladder_commutator_squared_route", worst_f2);
    sb.add("weighted_ladder_commutator_polynomial_route", worst_poly);

    // level-power commutators (raising)
    worst = 0.0;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix one = Matrix::Identity(d, d);
        Matrix hp = Matrix::Zero(d, d);
        for (int nu = 0; nu + 1 < d; ++nu) {
            hp(nu + 1, nu) = collective_ladder_factor(M, mu, nu + 1);
        }
        auto matpow = [&](const Matrix& m, int p) {
            Matrix r = one;
            for (int q = 0; q < p; ++q) r = r * m;
            return r;
        };
        for (int nn = 1; nn <= 3; ++nn) {
            Matrix lhs = commutator(matpow(y3.blocks[mu], nn + 1), hp);
            Matrix rhs = Matrix::Zero(d, d);
            for (int k = 0; k <= nn; ++k) {
                double sign = ((nn - k) % 2 == 0) ? 1.0 : -1.0;
                rhs += double(binom(nn + 1, k)) * sign * matpow(y3.blocks[mu], k) * hp;
            }
            worst = std::max(worst, max_abs(lhs - rhs));
        }
    }
    sb.add("level_power_commutator", worst);

    // weighted step operators land inside the symmetric closure (CC only)
    if (cc) {
        const int kc = std::min(space.cutoff, 4);
        std::vector<BlockOperator> hs;
        for (int j = 1; j <= M + 1; ++j) {
            hs.push_back(*g.find_symmetric("H_CC," + std::to_string(j)));
        }
        lie::LieBasis basis = lie::closure(lie::embedded_generators(hs, kc));
        const int n = space.offsets[kc + 1];
        double worst_mem = 0.0;
        for (int k = 1; k <= M; ++k) {
            Matrix ap = Matrix::Zero(n, n);
            Matrix a3 = Matrix::Zero(n, n);
            for (int mu = 0; mu <= kc; ++mu) {
                int o = space.offsets[mu], d = space.sector_dims[mu];
                if (k < d) {
                    ap(o + k, o + k - 1) = std::sqrt(double(mu + 1 - k));
                    a3(o + k, o + k) += 1.0;
                }
                if (k - 1 < d) a3(o + k - 1, o + k - 1) -= 1.0;
            }
            Matrix am = ap.adjoint();
            const Complex i1(0, 1);
            worst_mem = std::max(worst_mem, lie::span_residual(basis, i1 * (ap + am)));
            worst_mem = std::max(worst_mem, lie::span_residual(basis, Matrix(am - ap)));
            worst_mem = std::max(worst_mem, lie::span_residual(basis, i1 * a3));
        }
        sb.add("weighted_step_closure_membership", worst_mem, std::max(tolerance, 1e-10));
    }
}

}  // namespace

std::vector<IdentityResult> run_suite(const ModelSpace& space, double tolerance) {
    SuiteBuilder sb;
    sb.tolerance = tolerance;
    switch (space.kind) {
        case ModelKind::JC: jc_suite(sb, space); break;
        case ModelKind::IC: ic_suite(sb, space); break;
        case ModelKind::TC:
        case ModelKind::CC: collective_suite(sb, space, tolerance); break;
    }
    return sb.results;
}

}  // namespace cavlie::identities

#include "cavlie/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace cavlie {

namespace {

int popcount(int b) { return std::popcount(static_cast<unsigned>(b)); }

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// bit j (1-based, b_1 = MSB) of the packed bitstring
int bit_of(int b, int j, int M) { return (b >> (M - j)) & 1; }

}  // namespace

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "jc" || s == "JC") return ModelKind::JC;
    if (s == "ic" || s == "IC") return ModelKind::IC;
    if (s == "tc" || s == "TC") return ModelKind::TC;
    if (s == "cc" || s == "CC") return ModelKind::CC;
    throw ConfigError("unknown model kind: " + s);
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::JC: return "jc";
        case ModelKind::IC: return "ic";
        case ModelKind::TC: return "tc";
        case ModelKind::CC: return "cc";
    }
    return "?";
}

int ModelSpace::sector_of(int index) const {
    for (int mu = 0; mu < stored_sectors(); ++mu) {
        if (index < offsets[mu + 1]) return mu;
    }
    throw ConfigError("sector_of: index out of range");
}

int ModelSpace::index_of(int mu, int label) const {
    if (mu < 0 || mu >= stored_sectors()) return -1;
    const auto& ls = labels[mu];
    auto it = std::lower_bound(ls.begin(), ls.end(), label);
    if (it == ls.end() || *it != label) return -1;
    return offsets[mu] + static_cast<int>(it - ls.begin());
}

ModelSpace build_space(ModelKind kind, int atoms, int cutoff) {
    if (cutoff < 1) throw ConfigError("build_space: cutoff K must be >= 1");
    if (atoms < 1) throw ConfigError("build_space: atom count M must be >= 1");
    ModelSpace sp;
    sp.kind = kind;
    sp.atoms = (kind == ModelKind::JC) ? 1 : atoms;
    sp.cutoff = cutoff;
    const int M = sp.atoms;
    for (int mu = 0; mu < cutoff + 2; ++mu) {
        std::vector<int> ls;
        switch (kind) {
            case ModelKind::JC:
                for (int nu = 0; nu <= std::min(mu, 1); ++nu) ls.push_back(nu);
                break;
            case ModelKind::IC:
                for (int b = 0; b < (1 << M); ++b) {
                    if (popcount(b) <= mu) ls.push_back(b);
                }
                break;
            case ModelKind::TC:
            case ModelKind::CC:
                for (int nu = 0; nu <= std::min(mu, M); ++nu) ls.push_back(nu);
                break;
        }
        sp.labels.push_back(std::move(ls));
        sp.sector_dims.push_back(static_cast<int>(sp.labels.back().size()));
    }
    sp.offsets.assign(1, 0);
    for (int d : sp.sector_dims) sp.offsets.push_back(sp.offsets.back() + d);

    // sanity: IC dimension formula
    if (kind == ModelKind::IC) {
        for (int mu = 0; mu < cutoff + 2; ++mu) {
            long want = 0;
            for (int j = 0; j <= std::min(mu, M); ++j) want += binomial(M, j);
            if (want != sp.sector_dims[mu]) {
                throw PreconditionError("build_space: IC sector dimension mismatch");
            }
        }
    }
    return sp;
}

BlockOperator charge_operator(const ModelSpace& space) {
    BlockOperator op;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        op.blocks.push_back(static_cast<double>(mu) *
                            Matrix::Identity(space.sector_dims[mu], space.sector_dims[mu]));
    }
    return op;
}

BlockOperator identity_operator(const ModelSpace& space) {
    BlockOperator op;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        op.blocks.push_back(Matrix::Identity(space.sector_dims[mu], space.sector_dims[mu]));
    }
    return op;
}

const BlockOperator* GeneratorSet::find_symmetric(const std::string& name) const {
    for (const auto& [n, op] : symmetric) {
        if (n == name) return &op;
    }
    return nullptr;
}

namespace {

void require_kind(const ModelSpace& space, ModelKind k, const char* who) {
    if (space.kind != k) {
        throw ConfigError(std::string(who) + ": wrong model kind " + to_string(space.kind));
    }
}

// Pauli-type operators within one two-dimensional sector (nu = 0, 1).
Matrix varsigma(int alpha) {
    Matrix s(2, 2);
    switch (alpha) {
        case 0: s << 1, 0, 0, 1; break;
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw ConfigError("varsigma: alpha out of range");
    }
    return s;
}

}  // namespace

GeneratorSet jc_generators(const ModelSpace& space) {
    require_kind(space, ModelKind::JC, "jc_generators");
    GeneratorSet g;
    BlockOperator h1, h2, h3;
    h1.blocks.push_back(Matrix::Zero(1, 1));
    h2.blocks.push_back(Matrix::Zero(1, 1));
    h3.blocks.push_back(Matrix::Zero(1, 1));
    for (int mu = 1; mu < space.stored_sectors(); ++mu) {
        h1.blocks.push_back(-varsigma(3) / 2.0);
        h2.blocks.push_back(std::sqrt(double(mu)) * varsigma(1));
        h3.blocks.push_back((mu + 0.5) * varsigma(0) - varsigma(3) / 2.0);
    }
    g.symmetric.emplace_back("H_JC,1", std::move(h1));
    g.symmetric.emplace_back("H_JC,2", std::move(h2));
    g.symmetric.emplace_back("H_JC,3", std::move(h3));

    // breaker: atomic flip at fixed photon number, pairing |mu-1,0> with |mu,1>
    const int n = space.total_dim();
    Matrix h4 = Matrix::Zero(n, n);
    for (int mu = 1; mu < space.stored_sectors(); ++mu) {
        int i = space.index_of(mu - 1, 0);
        int j = space.index_of(mu, 1);
        h4(i, j) = 1.0;
        h4(j, i) = 1.0;
    }
    g.breaker_name = "H_JC,4";
    g.breaker = std::move(h4);
    g.includes_identity = true;
    return g;
}

GeneratorSet ic_generators(const ModelSpace& space) {
    require_kind(space, ModelKind::IC, "ic_generators");
    const int M = space.atoms;
    GeneratorSet g;
    // H_IC,j: diagonal occupation of atom j
    for (int j = 1; j <= M; ++j) {
        BlockOperator op;
        for (int mu = 0; mu < space.stored_sectors(); ++mu) {
            const auto& ls = space.labels[mu];
            Matrix b = Matrix::Zero(ls.size(), ls.size());
            for (size_t i = 0; i < ls.size(); ++i) b(i, i) = bit_of(ls[i], j, M);
            op.blocks.push_back(std::move(b));
        }
        g.symmetric.emplace_back("H_IC," + std::to_string(j), std::move(op));
    }
    // H_IC,M+j: excitation exchange between atom j and the mode
    for (int j = 1; j <= M; ++j) {
        BlockOperator op;
        for (int mu = 0; mu < space.stored_sectors(); ++mu) {
            const auto& ls = space.labels[mu];
            Matrix b = Matrix::Zero(ls.size(), ls.size());
            for (size_t i = 0; i < ls.size(); ++i) {
                int lab = ls[i];
                if (!bit_of(lab, j, M)) {
                    int up = lab | (1 << (M - j));
                    int pos = space.index_of(mu, up);
                    if (pos >= 0) {
                        double amp = std::sqrt(double(mu - popcount(lab)));
                        int row = pos - space.offsets[mu];
                        b(row, i) += amp;
                        b(i, row) += amp;
                    }
                }
            }
            op.blocks.push_back(std::move(b));
        }
        g.symmetric.emplace_back("H_IC," + std::to_string(M + j), std::move(op));
    }
    // breaker: flip of atom 1 at fixed photon number (shifts charge by +-1)
    const int n = space.total_dim();
    Matrix hb = Matrix::Zero(n, n);
    for (int mu = 0; mu + 1 < space.stored_sectors(); ++mu) {
        for (int lab : space.labels[mu]) {
            if (!bit_of(lab, 1, M)) {
                int up = lab | (1 << (M - 1));
                int i = space.index_of(mu, lab);
                int j = space.index_of(mu + 1, up);
                if (j >= 0) {
                    hb(j, i) = 1.0;
                    hb(i, j) = 1.0;
                }
            }
        }
    }
    g.breaker_name = "H_IC," + std::to_string(2 * M + 1);
    g.breaker = std::move(hb);
    g.includes_identity = true;
    return g;
}

double collective_ladder_factor(int atoms, double x, double y) {
    double a = std::max(x + 1.0 - y, 0.0);
    double b = std::max(atoms + 1.0 - y, 0.0);
    double c = std::max(y, 0.0);
    return std::sqrt(a) * std::sqrt(b) * std::sqrt(c);
}

namespace {

BlockOperator collective_exchange(const ModelSpace& space) {
    const int M = space.atoms;
    BlockOperator op;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix b = Matrix::Zero(d, d);
        for (int nu = 0; nu + 1 < d; ++nu) {
            double amp = collective_ladder_factor(M, mu, nu + 1);
            b(nu + 1, nu) = amp;
            b(nu, nu + 1) = amp;
        }
        op.blocks.push_back(std::move(b));
    }
    return op;
}

}  // namespace

GeneratorSet tc_generators(const ModelSpace& space) {
    require_kind(space, ModelKind::TC, "tc_generators");
    const int M = space.atoms;
    GeneratorSet g;
    BlockOperator h1, h3;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix b1 = Matrix::Zero(d, d), b3 = Matrix::Zero(d, d);
        for (int nu = 0; nu < d; ++nu) {
            b1(nu, nu) = nu - M / 2.0;
            b3(nu, nu) = mu - nu;
        }
        h1.blocks.push_back(std::move(b1));
        h3.blocks.push_back(std::move(b3));
    }
    g.symmetric.emplace_back("H_TC,1", std::move(h1));
    g.symmetric.emplace_back("H_TC,2", collective_exchange(space));
    g.symmetric.emplace_back("H_TC,3", std::move(h3));
    g.includes_identity = true;
    return g;
}

GeneratorSet cc_generators(const ModelSpace& space) {
    require_kind(space, ModelKind::CC, "cc_generators");
    const int M = space.atoms;
    GeneratorSet g;
    for (int k = 1; k <= M; ++k) {
        BlockOperator op;
        for (int mu = 0; mu < space.stored_sectors(); ++mu) {
            int d = space.sector_dims[mu];
            Matrix b = Matrix::Zero(d, d);
            if (k < d) b(k, k) = 1.0;
            if (k - 1 < d) b(k - 1, k - 1) = -1.0;
            op.blocks.push_back(std::move(b));
        }
        g.symmetric.emplace_back("H_CC," + std::to_string(k), std::move(op));
    }
    g.symmetric.emplace_back("H_CC," + std::to_string(M + 1), collective_exchange(space));

    // breaker: (|0><1| + |1><0|) on the collective level at fixed photon
    // number, pairing |mu,0> with |mu+1,1>
    const int n = space.total_dim();
    Matrix hb = Matrix::Zero(n, n);
    for (int mu = 0; mu + 1 < space.stored_sectors(); ++mu) {
        int i = space.index_of(mu, 0);
        int j = space.index_of(mu + 1, 1);
        if (i >= 0 && j >= 0) {
            hb(j, i) = 1.0;
            hb(i, j) = 1.0;
        }
    }
    g.breaker_name = "H_CC," + std::to_string(M + 2);
    g.breaker = std::move(hb);
    g.includes_identity = true;
    return g;
}

GeneratorSet model_generators(const ModelSpace& space) {
    switch (space.kind) {
        case ModelKind::JC: return jc_generators(space);
        case ModelKind::IC: return ic_generators(space);
        case ModelKind::TC: return tc_generators(space);
        case ModelKind::CC: return cc_generators(space);
    }
    throw ConfigError("model_generators: unknown kind");
}

BlockOperator a_alpha_k(const ModelSpace& space, int alpha, int k) {
    require_kind(space, ModelKind::JC, "a_alpha_k");
    if (alpha < 1 || alpha > 3) throw ConfigError("a_alpha_k: alpha must be 1..3");
    if (k < 0) throw ConfigError("a_alpha_k: k must be >= 0");
    BlockOperator op;
    op.blocks.push_back(Matrix::Zero(1, 1));
    for (int mu = 1; mu < space.stored_sectors(); ++mu) {
        double f = std::pow(double(mu), k);
        if (alpha != 3) f *= std::sqrt(double(mu));
        op.blocks.push_back(f * varsigma(alpha));
    }
    return op;
}

BlockOperator y3_operator(const ModelSpace& space) {
    if (space.kind != ModelKind::TC && space.kind != ModelKind::CC) {
        throw ConfigError("y3_operator: collective space required");
    }
    BlockOperator op;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix b = Matrix::Zero(d, d);
        for (int nu = 0; nu < d; ++nu) b(nu, nu) = nu;
        op.blocks.push_back(std::move(b));
    }
    return op;
}

BlockOperator y_plus(const ModelSpace& space) {
    if (space.kind != ModelKind::TC && space.kind != ModelKind::CC) {
        throw ConfigError("y_plus: collective space required");
    }
    BlockOperator op;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        int d = space.sector_dims[mu];
        Matrix b = Matrix::Zero(d, d);
        for (int nu = 0; nu + 1 < d; ++nu) b(nu + 1, nu) = 1.0;
        op.blocks.push_back(std::move(b));
    }
    return op;
}

BlockOperator y_minus(const ModelSpace& space) {
    BlockOperator yp = y_plus(space);
    for (auto& b : yp.blocks) b = b.adjoint().eval();
    return yp;
}

ComplementaritySplit ComplementaritySplit::swapped() const {
    ComplementaritySplit s;
    s.minus = plus;
    s.zero = zero;
    s.plus = minus;
    return s;
}

std::optional<ComplementaritySplit> declared_split(const ModelSpace& space) {
    ComplementaritySplit s;
    const int M = space.atoms;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        std::vector<int> mi, ze, pl;
        const auto& ls = space.labels[mu];
        switch (space.kind) {
            case ModelKind::JC:
                for (size_t i = 0; i < ls.size(); ++i) (ls[i] == 0 ? mi : pl).push_back(i);
                break;
            case ModelKind::IC:
                for (size_t i = 0; i < ls.size(); ++i) (bit_of(ls[i], 1, M) ? pl : mi).push_back(i);
                break;
            case ModelKind::CC:
                // declared orientation: plus = {nu=0}, minus = {nu=1}, zero = rest
                for (size_t i = 0; i < ls.size(); ++i) {
                    if (ls[i] == 0) pl.push_back(i);
                    else if (ls[i] == 1) mi.push_back(i);
                    else ze.push_back(i);
                }
                break;
            case ModelKind::TC:
                return std::nullopt;
        }
        s.minus.push_back(std::move(mi));
        s.zero.push_back(std::move(ze));
        s.plus.push_back(std::move(pl));
    }
    return s;
}

std::optional<ComplementaritySplit> ladder_split(const ModelSpace& space) {
    auto d = declared_split(space);
    if (!d) return std::nullopt;
    if (space.kind == ModelKind::CC) return d->swapped();
    return d;
}

}  // namespace cavlie

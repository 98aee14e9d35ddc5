#include "cavlie/lie_engine.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cavlie::lie {

namespace {

// Real coordinates of a complex matrix: [Re entries; Im entries].
Eigen::VectorXd vec_real(const Matrix& a) {
    const Index n2 = a.size();
    Eigen::VectorXd v(2 * n2);
    Eigen::Map<const Eigen::VectorXd> re(reinterpret_cast<const double*>(a.data()), 2 * n2);
    // interleaved (re,im) layout; split into two contiguous halves
    for (Index i = 0; i < n2; ++i) {
        v[i] = re[2 * i];
        v[n2 + i] = re[2 * i + 1];
    }
    return v;
}

Matrix mat_from_real(const Eigen::VectorXd& v, Index rows, Index cols) {
    Matrix a(rows, cols);
    const Index n2 = rows * cols;
    for (Index i = 0; i < n2; ++i) {
        a.data()[i] = Complex(v[i], v[n2 + i]);
    }
    return a;
}

int svd_rank(const Eigen::MatrixXd& rows, double threshold) {
    if (rows.rows() == 0 || rows.norm() == 0.0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    int r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()[i] > threshold) ++r;
    }
    return r;
}

// Incrementally grown orthonormal row set with two-pass projection.
struct OrthoSet {
    Eigen::MatrixXd rows;  // capacity x D, first `count` rows valid
    Index count = 0;

    void reserve(Index cap, Index D) { rows.resize(cap, D); }

    // Orthogonalize v in place; returns the residual norm.
    double project_out(Eigen::VectorXd& v) const {
        for (int pass = 0; pass < 2; ++pass) {
            if (count > 0) {
                Eigen::VectorXd c = rows.topRows(count) * v;
                v.noalias() -= rows.topRows(count).transpose() * c;
            }
        }
        return v.norm();
    }

    void append(const Eigen::VectorXd& v) {
        rows.row(count) = v;
        ++count;
    }
};

}  // namespace

LieBasis closure(const std::vector<Matrix>& generators, double tolerance, int max_dim) {
    if (generators.empty()) throw ConfigError("closure: empty generator set");
    const Index n = generators[0].rows();
    for (const auto& g : generators) {
        if (g.rows() != n || g.cols() != n) {
            throw DimensionError("closure: generators must share one square shape");
        }
        if (!is_anti_hermitian(g)) {
            throw PreconditionError("closure: generator is not anti-Hermitian within 1e-12");
        }
    }
    if (tolerance <= 0) throw ConfigError("closure: tol must be positive");
    const int ambient_cap = static_cast<int>(n * n);
    if (max_dim < 0) max_dim = ambient_cap;
    max_dim = std::min(max_dim, ambient_cap);

    LieBasis basis;
    basis.ambient_dim = n;
    basis.generator_count = static_cast<int>(generators.size());
    basis.tol = tolerance;

    const double threshold = tolerance * std::sqrt(double(n));
    OrthoSet ortho;
    ortho.reserve(max_dim, 2 * n * n);

    auto try_add = [&](const Matrix& cand) -> bool {
        Eigen::VectorXd v = vec_real(cand);
        double r = ortho.project_out(v);
        if (r > threshold) {
            v /= r;
            ortho.append(v);
            Matrix m = mat_from_real(v, n, n);
            basis.elements.push_back((m - m.adjoint().eval()) / 2.0);
            return true;
        }
        return false;
    };

    for (const auto& g : generators) {
        if (basis.dimension() >= max_dim) break;
        try_add(g);
    }

    // Process each unordered pair exactly once, in a fixed order; appended
    // elements join the pair queue. A full pass with no additions is implied
    // once every pair has been processed.
    bool truncated = false;
    for (size_t j = 1; j < basis.elements.size() && !truncated; ++j) {
        for (size_t i = 0; i < j; ++i) {
            if (basis.dimension() >= max_dim) {
                truncated = true;
                break;
            }
            try_add(commutator(basis.elements[i], basis.elements[j]));
        }
    }
    // A closure that fills the whole ambient algebra is closed by definition.
    basis.converged = !truncated || basis.dimension() == ambient_cap;
    return basis;
}

std::vector<Matrix> embedded_generators(const std::vector<BlockOperator>& hermitian_gens,
                                        int K) {
    std::vector<Matrix> out;
    out.reserve(hermitian_gens.size());
    for (const auto& g : hermitian_gens) {
        out.push_back(Complex(0, 1) * embed(g.truncated(K)));
    }
    return out;
}

namespace {

void require_block_diagonal(const LieBasis& basis, const ModelSpace& space, int K) {
    if (K < 0 || K + 1 > space.stored_sectors()) {
        throw ConfigError("per-sector projection: K out of range");
    }
    if (basis.ambient_dim != space.offsets[K + 1]) {
        throw DimensionError("per-sector projection: basis dimension != truncated space");
    }
    for (const auto& e : basis.elements) {
        Matrix off = e;
        for (int mu = 0; mu <= K; ++mu) {
            int o = space.offsets[mu], d = space.sector_dims[mu];
            off.block(o, o, d, d).setZero();
        }
        if (max_abs(off) > basis.tol * std::sqrt(double(basis.ambient_dim))) {
            throw PreconditionError("per-sector projection: basis is not block-diagonal");
        }
    }
}

Matrix traceless_per_block(const Matrix& e, const ModelSpace& space, int K) {
    Matrix m = e;
    for (int mu = 0; mu <= K; ++mu) {
        int o = space.offsets[mu], d = space.sector_dims[mu];
        Complex tr = m.block(o, o, d, d).trace() / double(d);
        m.block(o, o, d, d) -= tr * Matrix::Identity(d, d);
    }
    return m;
}

}  // namespace

std::vector<int> project_per_sector(const LieBasis& basis, const ModelSpace& space, int K) {
    require_block_diagonal(basis, space, K);
    std::vector<int> dims;
    for (int mu = 0; mu <= K; ++mu) {
        int o = space.offsets[mu], d = space.sector_dims[mu];
        Eigen::MatrixXd rows(basis.dimension(), 2 * d * d);
        for (int r = 0; r < basis.dimension(); ++r) {
            rows.row(r) = vec_real(Matrix(basis.elements[r].block(o, o, d, d)));
        }
        dims.push_back(svd_rank(rows, basis.tol));
    }
    return dims;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::FULL_SU_X: return "FULL_SU_X";
        case Classification::FULL_U_X: return "FULL_U_X";
        case Classification::PROPER_SUBALGEBRA: return "PROPER_SUBALGEBRA";
        case Classification::FULL_UNITARY: return "FULL_UNITARY";
        case Classification::SYMPLECTIC_CANDIDATE: return "SYMPLECTIC_CANDIDATE";
        case Classification::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

ControllabilityVerdict compare_to_su(const LieBasis& basis, const ModelSpace& space, int K) {
    require_block_diagonal(basis, space, K);
    ControllabilityVerdict v;
    v.per_sector_dims = project_per_sector(basis, space, K);
    v.global_dim = basis.dimension();

    for (int mu = 0; mu <= K; ++mu) {
        int d = space.sector_dims[mu];
        v.target_su_dims.push_back(d * d - 1);
    }

    // per-sector and global ranks after removing per-block trace parts
    const Index n = basis.ambient_dim;
    Eigen::MatrixXd su_rows(basis.dimension(), 2 * n * n);
    for (int r = 0; r < basis.dimension(); ++r) {
        su_rows.row(r) = vec_real(traceless_per_block(basis.elements[r], space, K));
    }
    v.su_reduced_dim = svd_rank(su_rows, basis.tol);
    v.center_dim = v.global_dim - v.su_reduced_dim;
    for (int mu = 0; mu <= K; ++mu) {
        int o = space.offsets[mu], d = space.sector_dims[mu];
        Eigen::MatrixXd rows(basis.dimension(), 2 * d * d);
        for (int r = 0; r < basis.dimension(); ++r) {
            Matrix b = basis.elements[r].block(o, o, d, d);
            b -= (b.trace() / double(d)) * Matrix::Identity(d, d);
            rows.row(r) = vec_real(b);
        }
        v.per_sector_su_dims.push_back(svd_rank(rows, basis.tol));
    }

    long sum_sq = 0, sum_su = 0;
    for (int mu = 0; mu <= K; ++mu) {
        long d = space.sector_dims[mu];
        sum_sq += d * d;
        sum_su += d * d - 1;
    }
    bool sectors_full_u = true, sectors_full_su = true;
    for (int mu = 0; mu <= K; ++mu) {
        int d = space.sector_dims[mu];
        sectors_full_u = sectors_full_u && v.per_sector_dims[mu] == d * d;
        sectors_full_su = sectors_full_su && v.per_sector_su_dims[mu] == d * d - 1;
    }

    std::ostringstream notes;
    if (!basis.converged) {
        v.classification = Classification::INCONCLUSIVE;
        notes << "closure did not converge within max_dim";
    } else if (v.global_dim == sum_sq && sectors_full_u) {
        v.classification = Classification::FULL_U_X;
        notes << "full u(X) on sectors 0.." << K;
    } else if (sectors_full_u && v.global_dim < sum_sq) {
        // the collective phenomenon: every single-sector projection exhausts
        // u(d_mu), yet the joint algebra is a proper subalgebra of u(X)
        v.classification = Classification::PROPER_SUBALGEBRA;
        notes << "every single-sector projection is full u(d_mu) but the global "
              << "dimension falls short of the u(X) target by "
              << (sum_sq - v.global_dim) << " of " << sum_sq;
    } else if (v.su_reduced_dim == sum_su && sectors_full_su) {
        v.classification = Classification::FULL_SU_X;
        notes << "su(X) reached modulo " << v.center_dim << " central direction(s)";
    } else {
        v.classification = Classification::PROPER_SUBALGEBRA;
        notes << "su deficit " << (sum_su - v.su_reduced_dim) << " of " << sum_su;
    }
    v.notes = notes.str();
    return v;
}

Classification classify_full(const LieBasis& basis, Index dim) {
    if (!basis.converged) return Classification::INCONCLUSIVE;
    const long d = static_cast<long>(dim);
    const long got = basis.dimension();
    if (got == d * d) return Classification::FULL_UNITARY;
    if (d % 2 == 0 && got == d * (d + 1) / 2) return Classification::SYMPLECTIC_CANDIDATE;
    return Classification::PROPER_SUBALGEBRA;
}

namespace {

int rank_of_tangents(const LieBasis& basis, const Vector& psi, const std::vector<int>* mask) {
    const Index n = psi.size();
    if (basis.ambient_dim != n) throw DimensionError("orbit_rank: dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-12) {
        throw PreconditionError("orbit_rank: psi must be a unit vector");
    }
    auto to_real = [&](const Vector& v) {
        Vector w = v;
        if (mask) {
            Vector m(mask->size());
            for (size_t i = 0; i < mask->size(); ++i) m[i] = v[(*mask)[i]];
            w = m;
        }
        Eigen::VectorXd r(2 * w.size());
        r.head(w.size()) = w.real();
        r.tail(w.size()) = w.imag();
        return r;
    };
    Eigen::MatrixXd rows(basis.dimension() + 1, 2 * (mask ? Index(mask->size()) : n));
    for (int i = 0; i < basis.dimension(); ++i) {
        rows.row(i) = to_real(basis.elements[i] * psi);
    }
    rows.row(basis.dimension()) = to_real(Complex(0, 1) * psi);
    return svd_rank(rows, basis.tol);
}

}  // namespace

int orbit_rank(const LieBasis& basis, const Vector& psi) {
    return rank_of_tangents(basis, psi, nullptr);
}

int orbit_rank_masked(const LieBasis& basis, const Vector& psi, const std::vector<int>& mask) {
    return rank_of_tangents(basis, psi, &mask);
}

double span_residual(const LieBasis& basis, const Matrix& a) {
    if (a.rows() != basis.ambient_dim || a.cols() != basis.ambient_dim) {
        throw DimensionError("span_residual: dimension mismatch");
    }
    Matrix r = a;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : basis.elements) {
            r -= hs_inner(e, r) * e;
        }
    }
    return hs_norm(r);
}

std::vector<Matrix> su_basis(int d) {
    std::vector<Matrix> out;
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix a = Matrix::Zero(d, d);
            a(j, k) = 1.0;
            a(k, j) = -1.0;
            out.push_back(a);
            Matrix b = Matrix::Zero(d, d);
            b(j, k) = Complex(0, 1);
            b(k, j) = Complex(0, 1);
            out.push_back(b);
        }
    }
    for (int j = 0; j + 1 < d; ++j) {
        Matrix a = Matrix::Zero(d, d);
        a(j, j) = Complex(0, 1);
        a(j + 1, j + 1) = Complex(0, -1);
        out.push_back(a);
    }
    return out;
}

std::vector<Matrix> su_basis_preserving(int d, const std::vector<int>& subset) {
    std::vector<int> inside = subset;
    std::sort(inside.begin(), inside.end());
    std::vector<int> outside;
    for (int i = 0; i < d; ++i) {
        if (!std::binary_search(inside.begin(), inside.end(), i)) outside.push_back(i);
    }
    std::vector<Matrix> out;
    auto lift = [&](const std::vector<int>& idx) {
        for (const auto& s : su_basis(static_cast<int>(idx.size()))) {
            Matrix a = Matrix::Zero(d, d);
            for (size_t p = 0; p < idx.size(); ++p) {
                for (size_t q = 0; q < idx.size(); ++q) {
                    a(idx[p], idx[q]) = s(p, q);
                }
            }
            out.push_back(a);
        }
    };
    lift(inside);
    lift(outside);
    if (!inside.empty() && !outside.empty()) {
        Matrix a = Matrix::Zero(d, d);
        for (int i : inside) a(i, i) = Complex(0, 1.0 / inside.size());
        for (int i : outside) a(i, i) = Complex(0, -1.0 / outside.size());
        out.push_back(a);
    }
    return out;
}

}  // namespace cavlie::lie

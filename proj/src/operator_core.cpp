#include "cavlie/operator_core.hpp"

#include <cmath>

namespace cavlie {

double max_abs(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tolerance) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a - a.adjoint()) <= tolerance;
}

bool is_anti_hermitian(const Matrix& a, double tolerance) {
    if (a.rows() != a.cols()) return false;
    return max_abs(a + a.adjoint()) <= tolerance;
}

double hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hs_inner: shape mismatch");
    }
    return a.cwiseProduct(b.conjugate()).sum().real();
}

double hs_norm(const Matrix& a) { return std::sqrt(hs_inner(a, a)); }

Matrix commutator(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw DimensionError("commutator: operands must be square and of equal shape");
    }
    return a * b - b * a;
}

Matrix expm_skew(const Matrix& h, double t) {
    if (h.rows() != h.cols()) {
        throw DimensionError("expm_skew: matrix must be square");
    }
    if (!is_hermitian(h)) {
        throw PreconditionError("expm_skew: matrix is not Hermitian within 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) {
        throw PreconditionError("expm_skew: eigendecomposition failed");
    }
    const auto& w = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    Vector phases(w.size());
    for (Index i = 0; i < w.size(); ++i) {
        phases[i] = std::exp(Complex(0.0, t * w[i]));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

std::vector<Index> BlockOperator::sector_dims() const {
    std::vector<Index> dims;
    dims.reserve(blocks.size());
    for (const auto& b : blocks) {
        if (b.rows() != b.cols()) {
            throw DimensionError("BlockOperator: non-square sector block");
        }
        dims.push_back(b.rows());
    }
    return dims;
}

Index BlockOperator::total_dim() const {
    Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    return n;
}

BlockOperator BlockOperator::truncated(int K) const {
    if (K < 0 || K + 1 > sectors()) {
        throw ConfigError("BlockOperator::truncated: sector range out of bounds");
    }
    BlockOperator out;
    out.blocks.assign(blocks.begin(), blocks.begin() + K + 1);
    return out;
}

BlockOperator block_map(const BlockOperator& op,
                        const std::function<Matrix(const Matrix&, int)>& f) {
    BlockOperator out;
    out.blocks.reserve(op.blocks.size());
    for (int mu = 0; mu < op.sectors(); ++mu) {
        try {
            out.blocks.push_back(f(op.blocks[mu], mu));
        } catch (const std::exception& e) {
            throw PreconditionError("block_map: sector " + std::to_string(mu) + ": " + e.what());
        }
        if (out.blocks.back().rows() != op.blocks[mu].rows()) {
            throw DimensionError("block_map: sector " + std::to_string(mu) +
                                 " changed dimension");
        }
    }
    return out;
}

BlockOperator block_exp(const BlockOperator& op, double t) {
    return block_map(op, [t](const Matrix& b, int) { return expm_skew(b, t); });
}

Matrix embed(const BlockOperator& op) {
    Index n = op.total_dim();
    Matrix out = Matrix::Zero(n, n);
    Index off = 0;
    for (const auto& b : op.blocks) {
        out.block(off, off, b.rows(), b.rows()) = b;
        off += b.rows();
    }
    return out;
}

namespace {
bool is_projection(const Matrix& p, double tolerance) {
    return is_hermitian(p, tolerance) && max_abs(p * p - p) <= tolerance;
}
}  // namespace

PartialIsometryReport partial_isometry_check(const Matrix& a, const Matrix& source,
                                             const Matrix& target, double tolerance) {
    if (a.rows() != a.cols() || source.rows() != a.rows() || target.rows() != a.rows() ||
        source.rows() != source.cols() || target.rows() != target.cols()) {
        throw DimensionError("partial_isometry_check: all operands must be square, same shape");
    }
    if (!is_projection(source, tolerance) || !is_projection(target, tolerance)) {
        throw PreconditionError("partial_isometry_check: source/target are not projections");
    }
    PartialIsometryReport rep;
    rep.source_residual = max_abs(a.adjoint() * a - source);
    rep.target_residual = max_abs(a * a.adjoint() - target);
    rep.ok = rep.source_residual <= tolerance && rep.target_residual <= tolerance;
    return rep;
}

}  // namespace cavlie

// operator_core.hpp — dense complex matrix primitives and charge-block arithmetic.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavlie {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Error taxonomy; the CLI maps ConfigError -> exit 1, PreconditionError -> exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : PreconditionError {
    using PreconditionError::PreconditionError;
};

namespace tol {
inline constexpr double structural = 1e-12;  // Hermiticity and algebraic identities
inline constexpr double unitarity = 1e-10;
inline constexpr double rank = 1e-9;  // closure / rank decisions
}  // namespace tol

// Max-entry norm.
double max_abs(const Matrix& a);

bool is_hermitian(const Matrix& a, double tolerance = tol::structural);
bool is_anti_hermitian(const Matrix& a, double tolerance = tol::structural);

// Real Hilbert-Schmidt inner product Re tr(a^dag b).
double hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

Matrix commutator(const Matrix& a, const Matrix& b);

// exp(i t h) for Hermitian h, via eigendecomposition.
Matrix expm_skew(const Matrix& h, double t);

// Charge-conserving operator: one dense square block per charge sector.
struct BlockOperator {
    std::vector<Matrix> blocks;

    int sectors() const { return static_cast<int>(blocks.size()); }
    std::vector<Index> sector_dims() const;
    Index total_dim() const;
    // Keep sectors 0..K.
    BlockOperator truncated(int K) const;
};

BlockOperator block_map(const BlockOperator& op,
                        const std::function<Matrix(const Matrix&, int)>& f);
BlockOperator block_exp(const BlockOperator& op, double t);

// Dense block-diagonal matrix on the concatenated sector basis; off-block
// entries are exactly zero.
Matrix embed(const BlockOperator& op);
// Same, validating the block shapes against expected sector dimensions.
Matrix embed(const BlockOperator& op, const std::vector<int>& expected_sector_dims);

struct PartialIsometryReport {
    bool ok = false;
    double source_residual = 0.0;
    double target_residual = 0.0;
};

// True iff a^dag a == source and a a^dag == target within tolerance (max-entry
// norm). source and target must be orthogonal projections.
PartialIsometryReport partial_isometry_check(const Matrix& a, const Matrix& source,
                                             const Matrix& target, double tolerance);

}  // namespace cavlie

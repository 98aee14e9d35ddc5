// lie_engine.hpp — real Lie-algebra closure of anti-Hermitian matrices,
// per-sector projections, and controllability classification.
#pragma once

#include "cavlie/models.hpp"
#include "cavlie/operator_core.hpp"

#include <string>
#include <vector>

namespace cavlie::lie {

// Orthonormal (Hilbert-Schmidt) basis of the generated real Lie algebra.
struct LieBasis {
    Index ambient_dim = 0;
    std::vector<Matrix> elements;
    int generator_count = 0;
    bool converged = true;
    double tol = tol::rank;

    int dimension() const { return static_cast<int>(elements.size()); }
};

// Iterated-commutator closure. Seeds with Gram-Schmidt of the generators, then
// processes every unordered pair of basis elements in a fixed order; a
// commutator is appended when its component orthogonal to the current span has
// Hilbert-Schmidt norm above tol*sqrt(ambient_dim). max_dim < 0 means the
// ambient bound ambient_dim^2.
LieBasis closure(const std::vector<Matrix>& generators, double tolerance = tol::rank,
                 int max_dim = -1);

// Convenience: i * (block operators truncated to sectors 0..K), embedded.
std::vector<Matrix> embedded_generators(const std::vector<BlockOperator>& hermitian_gens,
                                        int K);

// Rank of the mu-blocks of all basis elements, per sector 0..K. Requires
// block-diagonal elements (off-block mass below tol).
std::vector<int> project_per_sector(const LieBasis& basis, const ModelSpace& space, int K);

enum class Classification {
    FULL_SU_X,
    FULL_U_X,
    PROPER_SUBALGEBRA,
    FULL_UNITARY,
    SYMPLECTIC_CANDIDATE,
    INCONCLUSIVE,
};
std::string to_string(Classification c);

struct ControllabilityVerdict {
    std::vector<int> per_sector_dims;     // raw projected dimensions
    std::vector<int> per_sector_su_dims;  // after removing per-block trace parts
    std::vector<int> target_su_dims;      // d_mu^2 - 1
    int global_dim = 0;
    int su_reduced_dim = 0;
    int center_dim = 0;  // global_dim - su_reduced_dim
    Classification classification = Classification::INCONCLUSIVE;
    std::string notes;
};

// Classify a block-diagonal closure against su(X)/u(X) on sectors 0..K.
// Per-block trace components are quotiented before the su comparison, so
// generator lists containing identity shifts classify by their su content.
ControllabilityVerdict compare_to_su(const LieBasis& basis, const ModelSpace& space, int K);

// Classify a closure on a full dim-dimensional space by dimension count.
Classification classify_full(const LieBasis& basis, Index dim);

// Rank of the real span of {e psi : e in basis} united with {i psi}.
int orbit_rank(const LieBasis& basis, const Vector& psi);
// Same, with the tangent vectors restricted to the given component indices.
int orbit_rank_masked(const LieBasis& basis, const Vector& psi, const std::vector<int>& mask);

// Hilbert-Schmidt norm of the component of a orthogonal to span(basis).
double span_residual(const LieBasis& basis, const Matrix& a);

// Anti-Hermitian traceless basis of su(d), fixed deterministic order.
std::vector<Matrix> su_basis(int d);
// su(d) elements block-diagonal with respect to subset vs complement.
std::vector<Matrix> su_basis_preserving(int d, const std::vector<int>& subset);

}  // namespace cavlie::lie

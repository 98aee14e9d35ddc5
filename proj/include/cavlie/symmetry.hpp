// symmetry.hpp — truncation subspaces, complementarity checking, and the
// polar-decomposition truncation of unitaries.
#pragma once

#include "cavlie/lie_engine.hpp"
#include "cavlie/models.hpp"
#include "cavlie/operator_core.hpp"

#include <string>
#include <vector>

namespace cavlie::sym {

// Indices of the plain truncation: sectors 0..K.
std::vector<int> truncated_indices(const ModelSpace& space, int K);

// Indices of the extended truncation H_[K]: sectors 0..K plus the part of
// sector K+1 the breaker ladder maps down into sector K (the ladder's source
// side; `split` must be in the ladder orientation, plus(mu+1) -> minus(mu)).
std::vector<int> f_space_indices(const ModelSpace& space, const ComplementaritySplit& split,
                                 int K);

// Projection matrix onto a set of basis indices.
Matrix projector(const std::vector<int>& indices, int dim);

struct RungReport {
    int mu = 0;
    bool ok = false;
    double source_residual = 0.0;
    double target_residual = 0.0;
    double intertwine_residual = 0.0;
};

struct ComplementarityReport {
    bool kernel_ok = false;
    double kernel_residual = 0.0;
    bool ladder_ok = false;           // rungs mu = 2..K-1
    double ladder_worst_residual = 0.0;
    std::vector<RungReport> rungs;    // mu = 1..K-1; mu = 1 reported, not judged
    double intertwine_worst = 0.0;
    bool seed_transitive = false;
    std::string seed_note;
    std::string orientation;  // "as-given" or "swapped"
    bool verdict = false;
};

// Check the three complementarity conditions for a Hermitian h against the
// declared split. If the ladder fails as given, the swapped orientation is
// tested and reported. Condition (iii) is certified by a sufficient numeric
// criterion: the closure of {i h restricted to H_[Kiii]} together with the
// per-block su generators commuting with F_[0] must have orbit rank at least
// 2 dim(H_[0]) - 1 through every canonical basis vector of H_[0].
ComplementarityReport check_complementarity(const Matrix& h, const ModelSpace& space,
                                            const ComplementaritySplit& declared,
                                            double tolerance,
                                            int transitivity_cutoff = 2);

struct PolarTruncation {
    Matrix partial_isometry;   // U_[K]: source = target = F_[K], zero elsewhere
    Matrix completed_unitary;  // U_[K] extended by the identity on the complement
    std::vector<double> probe_errors;  // ||(U_[K] - u) psi|| per probe
    double min_singular_value = 0.0;
    bool rank_deficient = false;
};

// Polar-decompose the compression F_[K] u F_[K] of a unitary u into a partial
// isometry on H_[K] plus a deterministic unitary completion.
PolarTruncation polar_truncate(const Matrix& u, const ModelSpace& space, int K,
                               const ComplementaritySplit& split,
                               const std::vector<Vector>& probes);

}  // namespace cavlie::sym

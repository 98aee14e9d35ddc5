// models.hpp — charge-sector truncations and generator sets for the four
// atom-cavity control systems (single atom, individual control, collective
// Tavis-Cummings control, extended collective control).
#pragma once

#include "cavlie/operator_core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cavlie {

enum class ModelKind { JC, IC, TC, CC };

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind k);

// A truncated, charge-labeled basis. Sectors mu = 0..cutoff+1 are stored; the
// extra sector supports the extended truncation spaces used by the
// symmetry-breaking analysis.
//
// Intra-sector labels: JC/TC/CC use the atomic excitation number nu; IC uses
// the bitstring b packed into an int with b_1 as the most significant bit
// (ascending int order == lexicographic order in (b_1,...,b_M)).
struct ModelSpace {
    ModelKind kind = ModelKind::JC;
    int atoms = 1;   // M
    int cutoff = 1;  // K
    std::vector<int> sector_dims;          // indexed mu = 0..cutoff+1
    std::vector<std::vector<int>> labels;  // per sector, ascending
    std::vector<int> offsets;              // size cutoff+3

    int stored_sectors() const { return cutoff + 2; }
    int total_dim() const { return offsets.back(); }
    int sector_of(int index) const;
    // Position of |mu, label> in the concatenated basis; -1 if absent.
    int index_of(int mu, int label) const;
};

ModelSpace build_space(ModelKind kind, int atoms, int cutoff);

BlockOperator charge_operator(const ModelSpace& space);
BlockOperator identity_operator(const ModelSpace& space);

// Named control Hamiltonians. Symmetric generators commute with the charge
// operator and are stored blockwise; the breaker (when the model has one) is
// a dense Hermitian matrix on the stored basis, connecting adjacent sectors.
struct GeneratorSet {
    std::vector<std::pair<std::string, BlockOperator>> symmetric;
    std::string breaker_name;  // empty when the model has no breaker
    Matrix breaker;
    bool includes_identity = true;

    bool has_breaker() const { return !breaker_name.empty(); }
    const BlockOperator* find_symmetric(const std::string& name) const;
};

GeneratorSet jc_generators(const ModelSpace& space);
GeneratorSet ic_generators(const ModelSpace& space);
GeneratorSet tc_generators(const ModelSpace& space);
GeneratorSet cc_generators(const ModelSpace& space);
GeneratorSet model_generators(const ModelSpace& space);

// sqrt(X) X^k sigma_alpha ladder family on the single-atom space; zero at mu=0.
BlockOperator a_alpha_k(const ModelSpace& space, int alpha, int k);

// Collective-space ladder operators (TC/CC): Y3 |mu;nu> = nu |mu;nu>, and the
// unit raising/lowering steps within each sector.
BlockOperator y3_operator(const ModelSpace& space);
BlockOperator y_plus(const ModelSpace& space);
BlockOperator y_minus(const ModelSpace& space);
// Ladder amplitude f(x,y) = sqrt(x+1-y) sqrt(M+1-y) sqrt(y).
double collective_ladder_factor(int atoms, double x, double y);

// Per-sector partition of the basis into minus/zero/plus index sets used by
// the symmetry-breaking analysis.
struct ComplementaritySplit {
    std::vector<std::vector<int>> minus;
    std::vector<std::vector<int>> zero;
    std::vector<std::vector<int>> plus;

    ComplementaritySplit swapped() const;  // exchange minus and plus
    int sectors() const { return static_cast<int>(minus.size()); }
};

// The split each model declares for its breaker. For CC the declared
// orientation has the ladder reversed (the checker detects and reports this).
std::optional<ComplementaritySplit> declared_split(const ModelSpace& space);
// The orientation under which the breaker ladder maps plus(mu+1) -> minus(mu).
std::optional<ComplementaritySplit> ladder_split(const ModelSpace& space);

}  // namespace cavlie

// control.hpp — piecewise-constant schedule propagation, the strong
// (finite-vector) error metric, and derivative-free schedule synthesis.
#pragma once

#include "cavlie/models.hpp"
#include "cavlie/operator_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cavlie::ctrl {

struct Segment {
    std::string generator;
    double duration = 0.0;  // >= 0
    double amplitude = 0.0;
};

struct ControlSchedule {
    std::vector<Segment> segments;

    double total_time() const;
    // Segments in reverse order with negated amplitudes (the inverse schedule).
    ControlSchedule reversed_negated() const;
};

struct StrongErrorReport {
    std::vector<double> per_vector_errors;
    double max_error = 0.0;
    int vectors_used = 0;
};

// The subspace schedules act on: H_[K] when the model has a breaker, else the
// plain truncation to sectors 0..K.
std::vector<int> propagation_indices(const ModelSpace& space, int K);

struct PropagationResult {
    Matrix unitary;                       // on the propagation subspace
    std::vector<int> indices;             // ambient indices of that subspace
    std::vector<double> segment_leakage;  // discarded coupling x |angle|, per segment
};

// Ordered product of exp(i amplitude duration H_segment). Charge-conserving
// generators are exponentiated per sector, so symmetric-only schedules have
// exactly zero inter-sector matrix elements.
PropagationResult propagate(const ControlSchedule& schedule, const GeneratorSet& gens,
                            const ModelSpace& space, int K);

// Per-vector ||(u_target - u_actual) psi||; with phase_free, one joint global
// phase on u_actual is removed first (least-squares over the given vectors).
StrongErrorReport strong_error(const Matrix& u_target, const Matrix& u_actual,
                               const std::vector<Vector>& vectors, bool phase_free);

struct SynthesisOptions {
    std::uint64_t seed = 0;
    int restarts = 5;
    int max_passes = 50;
    bool phase_free = true;
};

struct SynthesisResult {
    ControlSchedule schedule;
    StrongErrorReport report;
    bool success = false;
    double best_objective = 0.0;
    std::vector<double> segment_leakage;
};

// Alternating-generator ansatz of at most `budget` segments; segment angles
// are tuned by derivative-free coordinate descent (dense 1-D scan per segment
// in the generator eigenframe) with seeded random restarts. Failing to reach
// eps within the budget is a valid outcome, not an error.
SynthesisResult synthesize_unitary(const Matrix& target, const GeneratorSet& gens,
                                   const ModelSpace& space, int K,
                                   const std::vector<Vector>& vectors, double eps, int budget,
                                   const SynthesisOptions& opts);

struct ReachResult {
    ControlSchedule schedule;
    double overlap = 0.0;     // |<psi_target| U |psi_0>|
    double infidelity = 0.0;  // 1 - overlap^2
    bool success = false;
};

// Schedule maximizing |<psi_target| U |psi_0>|; success when the infidelity
// drops below eps^2. State vectors may be given on the ambient space (support
// inside the propagation subspace) or directly on the subspace.
ReachResult reach_state(const Vector& psi0, const Vector& psi_target, const GeneratorSet& gens,
                        const ModelSpace& space, int K, double eps, int budget,
                        const SynthesisOptions& opts);

}  // namespace cavlie::ctrl

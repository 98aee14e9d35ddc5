// identities.hpp — operator-algebra identity suite for the model generators,
// checked against independently constructed tensor-product operators.
#pragma once

#include "cavlie/models.hpp"

#include <string>
#include <vector>

namespace cavlie::identities {

struct IdentityResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Run every identity applicable to the model of `space`. `tolerance` is the
// pass/fail bound on residuals (max-entry norm); closure-membership checks use
// the rank tolerance internally.
std::vector<IdentityResult> run_suite(const ModelSpace& space, double tolerance = 1e-10);

// Independent construction routes (atom x mode tensor products mapped onto the
// charge-labeled basis), used by the suite and by tests.
Matrix tensor_route_jc(const ModelSpace& space, int which);      // which = 1..4
Matrix tensor_route_ic(const ModelSpace& space, int which);      // 1..2M+1
Matrix tensor_route_collective(const ModelSpace& space, int which);  // TC 1..3; CC breaker = 4

}  // namespace cavlie::identities

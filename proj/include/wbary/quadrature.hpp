// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace wbary {

// Adaptive Simpson on [a, b] with absolute error target. min_depth forces
// refinement before the error estimate is trusted, guarding against
// premature termination on integrands with localized kinks.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 40,
                        int min_depth = 2);

}  // namespace wbary

#pragma once

#include <functional>

#include "morseinf/errors.hpp"

namespace morseinf {

// Solve g(t) = target for t > 0 where g(0+) < target and g is increasing on
// the bracket. Expanding bracket with geometric growth factor 2 starting at
// t = 1 (also shrinking toward 0 when g(1) already overshoots), then plain
// bisection down to tol in t. Mirrors the intermediate-value arguments of
// the existence proofs.
double solve_increasing(const std::function<double(double)>& g, double target,
                        double tol, const char* what);

}  // namespace morseinf

#pragma once

#include "morseinf/problem.hpp"

namespace morseinf {

// Desk-scale model on R^3 with coordinates (z, x+, x-) and
// B(inf) = diag(0, 2, -2):
//   L(z, x+, x-) = x+^2 - x-^2 + eps*sin(z)*(x+ + x-) + gamma*cos(z)
// The off-kernel equation is affine, so h(z) = (-eps*sin(z)/2, eps*sin(z)/2)
// in closed form and the reduced functional is gamma*cos(z).
FunctionalProblem make_trig_model(double eps = 0.1, double gamma = 1.0,
                                  double infinity_radius = 10.0);

// Same skeleton with the coupling damped by 1/(1+z^2), so that
// B(x) - B(inf) decays along the kernel.
FunctionalProblem make_damped_trig_model(double eps = 0.1, double gamma = 1.0,
                                         double infinity_radius = 10.0);

// Pure quadratic L(x) = (B_inf x, x)/2.
FunctionalProblem make_quadratic_model(SymOperator B_inf,
                                       double infinity_radius = 10.0);

// Indefinite quadratic with a plus/minus cross term on R^3,
// B(inf) = diag(0, 2, -2):
//   L(z, x+, x-) = x+^2 - x-^2 + c*x+*x-
// The fiber maximizer over H- is c*x+/2 in closed form.
FunctionalProblem make_coupled_model(double c = 0.1,
                                     double infinity_radius = 10.0);

// Definite quadratic L(u) = a*||u||^2 on R^dim (nondegenerate-at-infinity
// chart test case; B(inf) = 2a*I).
FunctionalProblem make_definite_model(double a, int dim,
                                      double infinity_radius = 10.0);

}  // namespace morseinf

#pragma once

#include <cstdint>
#include <vector>

#include "morseinf/problem.hpp"

namespace morseinf {

// Finite-difference consistency of A against L, condition (F2).
// pass iff the worst relative error over the samples is <= 1e-5.
HypothesisReport audit_gradient(const FunctionalProblem& p, int samples,
                                std::uint64_t seed);

// Finite-difference consistency of B against A, condition (F3).
// pass tolerance 1e-4 relative.
HypothesisReport audit_hessian(const FunctionalProblem& p, int samples,
                               std::uint64_t seed);

// Decay of the Hessian perturbation along a radius ladder: at each radius R
// we estimate
//   omega(R) = max |((B(x)-B(inf))u, v)| / (||u|| ||v||),  v in H0 (+) H-,
// reusing the same sampled directions at every radius so the trend is not
// polluted by sampling noise. Pass iff omega is non-increasing and the last
// value is < a_infty/2; the sign bounds on H+ / H- are certified at the
// largest radius.
HypothesisReport audit_D_infty(const FunctionalProblem& p,
                               const SpectralSplit& split,
                               const std::vector<double>& radii,
                               int samples_per_radius,
                               std::uint64_t seed = 12345);

// Sampled Lipschitz certificate for the fixed-point map. Pairs (x1, x2) are
// drawn in the trial ball of H+-, kernel points with ||z|| in [R1, 10 R1];
// the ratio
//   ||(I-P0)(A(z1+x1)-A(z2+x2)) - B(inf)(x1-x2)|| / ||(z1+x1)-(z2+x2)||
// must stay <= 1/(kappa*c1). In E'-mode z1 == z2. M(A) is estimated by
// sampling ||(I-P0)A(z)|| over the kernel.
ContractionData estimate_contraction(const FunctionalProblem& p,
                                     const SpectralSplit& split,
                                     const OperatorConstants& consts,
                                     double kappa, double trial_rho, double R1,
                                     int samples, ContractionMode mode,
                                     std::uint64_t seed = 12345);

}  // namespace morseinf

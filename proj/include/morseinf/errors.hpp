#pragma once

#include <stdexcept>
#include <string>

namespace morseinf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// hilbert_core
struct NonSymmetric : Error { using Error::Error; };
struct GapViolation : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateComplement : Error { using Error::Error; };

// functional_model
struct ContractionViolated : Error { using Error::Error; };
struct RhoTooSmall : Error { using Error::Error; };

// reduction
struct NoConvergence : Error {
  NoConvergence(const std::string& what, int iterations, double last_residual)
      : Error(what), iterations(iterations), last_residual(last_residual) {}
  int iterations;
  double last_residual;
};
struct LeftBall : Error { using Error::Error; };

// normal_form
struct ConcavityViolation : Error { using Error::Error; };
struct NegativeRadicand : Error { using Error::Error; };
struct BracketFailure : Error { using Error::Error; };
struct MonotonicityViolation : Error { using Error::Error; };

// bvp_app
struct QuadratureUnderflow : Error { using Error::Error; };
struct GuardBand : Error { using Error::Error; };
struct NotResonant : Error { using Error::Error; };
struct ScenarioMismatch : Error { using Error::Error; };

// cli
struct ConfigParse : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

}  // namespace morseinf

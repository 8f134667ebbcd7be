#pragma once

#include <stdexcept>
#include <string>

namespace rhlab {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// curve / path construction
struct BadDegree : NumericError { using NumericError::NumericError; };
struct RepeatedRoots : NumericError { using NumericError::NumericError; };
struct PathTooClose : NumericError { using NumericError::NumericError; };
struct DegenerateConfiguration : NumericError { using NumericError::NumericError; };

// differentials / quadrature
struct QuadratureNotConverged : NumericError { using NumericError::NumericError; };
struct ZeroOnPath : NumericError { using NumericError::NumericError; };

// monodromy
struct StepUnderflow : NumericError { using NumericError::NumericError; };
struct VanishingTrace : NumericError { using NumericError::NumericError; };
struct RelationViolation : NumericError { using NumericError::NumericError; };
struct DegenerateFit : NumericError { using NumericError::NumericError; };

// flat surfaces
struct MismatchedEdges : NumericError { using NumericError::NumericError; };
struct Disconnected : NumericError { using NumericError::NumericError; };
struct HitsConePoint : NumericError { using NumericError::NumericError; };
struct NotCloseEnough : NumericError { using NumericError::NumericError; };
struct InsertTooSteep : NumericError { using NumericError::NumericError; };
struct SearchExhausted : NumericError {
  double best_margin;
  explicit SearchExhausted(const std::string& msg, double margin)
      : NumericError(msg), best_margin(margin) {}
};

// fiber solving
struct NoConvergence : NumericError { using NumericError::NumericError; };
struct JacobianSingular : NumericError { using NumericError::NumericError; };

// semiflat
struct ZeroCollision : NumericError { using NumericError::NumericError; };
struct NotPositiveDefinite : NumericError { using NumericError::NumericError; };
struct OutsideDomain : NumericError { using NumericError::NumericError; };
struct StencilOutsideDomain : NumericError { using NumericError::NumericError; };

// cli
struct ConfigParse : NumericError { using NumericError::NumericError; };

}  // namespace rhlab

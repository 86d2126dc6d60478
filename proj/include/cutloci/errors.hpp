#ifndef CUTLOCI_ERRORS_HPP
#define CUTLOCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cutloci {

// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CUTLOCI_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                             \
    explicit Name(const std::string& what) : Error(what) {}         \
  }

// Matrix-function preconditions.
CUTLOCI_DEFINE_ERROR(NotSymmetricError);
CUTLOCI_DEFINE_ERROR(NotPositiveDefiniteError);
CUTLOCI_DEFINE_ERROR(NoConvergenceError);
CUTLOCI_DEFINE_ERROR(SingularError);
CUTLOCI_DEFINE_ERROR(DimensionMismatchError);

// Orthogonal-group distance.
CUTLOCI_DEFINE_ERROR(FullRankError);
CUTLOCI_DEFINE_ERROR(NotOrthogonalError);

// Left-invariant geometry.
CUTLOCI_DEFINE_ERROR(NonPositiveDeterminantError);

// Indefinite unitary group.
CUTLOCI_DEFINE_ERROR(NotInGroupError);
CUTLOCI_DEFINE_ERROR(NotInAlgebraError);
CUTLOCI_DEFINE_ERROR(BlockSingularError);
CUTLOCI_DEFINE_ERROR(NotNPartError);
CUTLOCI_DEFINE_ERROR(PhaseBoundaryError);

// Model spaces and cut times.
CUTLOCI_DEFINE_ERROR(InvalidPointError);
CUTLOCI_DEFINE_ERROR(InvalidTangentError);
CUTLOCI_DEFINE_ERROR(InvalidAxesError);
CUTLOCI_DEFINE_ERROR(BracketTooSmallError);

// Gradient flow.
CUTLOCI_DEFINE_ERROR(OnCutLocusError);
CUTLOCI_DEFINE_ERROR(OnSubmanifoldError);

#undef CUTLOCI_DEFINE_ERROR

}  // namespace cutloci

#endif

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kts {

/// Base class for all library errors. `code()` is a stable machine-readable
/// tag (e.g. "E_NOT_POSITIVE_DEFINITE") used by the CLI for single-line
/// error reporting.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error("E_DIMENSION_MISMATCH", what) {}
};

struct NotSymmetric : Error {
  explicit NotSymmetric(const std::string& what) : Error("E_NOT_SYMMETRIC", what) {}
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& what)
      : Error("E_NOT_POSITIVE_DEFINITE", what) {}
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& what) : Error("E_NON_CONVERGENCE", what) {}
};

struct Overflow : Error {
  explicit Overflow(const std::string& what) : Error("E_OVERFLOW", what) {}
};

struct BadLength : Error {
  explicit BadLength(const std::string& what) : Error("E_BAD_LENGTH", what) {}
};

struct ImageTooSmall : Error {
  explicit ImageTooSmall(const std::string& what) : Error("E_IMAGE_TOO_SMALL", what) {}
};

struct RegionOutOfBounds : Error {
  explicit RegionOutOfBounds(const std::string& what) : Error("E_REGION_OUT_OF_BOUNDS", what) {}
};

struct DegenerateRegion : Error {
  explicit DegenerateRegion(const std::string& what) : Error("E_DEGENERATE_REGION", what) {}
};

struct KTooLarge : Error {
  explicit KTooLarge(const std::string& what) : Error("E_K_TOO_LARGE", what) {}
};

struct TooFewPositives : Error {
  explicit TooFewPositives(const std::string& what) : Error("E_TOO_FEW_POSITIVES", what) {}
};

struct SingularSystem : Error {
  explicit SingularSystem(const std::string& what) : Error("E_SINGULAR_SYSTEM", what) {}
};

struct OneClassOnly : Error {
  explicit OneClassOnly(const std::string& what) : Error("E_ONE_CLASS_ONLY", what) {}
};

struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& what) : Error("E_WINDOW_TOO_SMALL", what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("E_PARSE", what) {}
};

struct MissingFile : Error {
  explicit MissingFile(const std::string& what) : Error("E_MISSING_FILE", what) {}
};

struct EmptyInput : Error {
  explicit EmptyInput(const std::string& what) : Error("E_EMPTY_INPUT", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("E_IO", what) {}
};

}  // namespace kts

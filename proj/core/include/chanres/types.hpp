#ifndef CHANRES_TYPES_HPP
#define CHANRES_TYPES_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chanres {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Default numerical tolerances used by the type validators.
namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double kraus = 1e-9;
inline constexpr double support = 1e-9;
inline constexpr double eig_clip = 1e-9;
}  // namespace tol

// -------------------------------------------------------------------------
// Error types
// -------------------------------------------------------------------------

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonCompletelyPositive : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonTracePreserving : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotADistribution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotCqChannel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedKind : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedMonotone : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SupportViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// -------------------------------------------------------------------------
// Extended real values
// -------------------------------------------------------------------------

// A nonnegative quantity that may be +infinity (e.g. D_max when the support
// condition fails). The infinity case is an explicit flag, never a sentinel.
class ExtReal {
 public:
  ExtReal() : value_(0.0), infinite_(false) {}
  static ExtReal finite(double v) { return ExtReal(v, false); }
  static ExtReal infinity() { return ExtReal(0.0, true); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  // Value of a finite quantity; throws if infinite.
  double value() const {
    if (infinite_) throw std::logic_error("ExtReal: value() on +inf");
    return value_;
  }

  // Collapses to a double, mapping the flag to IEEE +inf (display only).
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

 private:
  ExtReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace chanres

#endif  // CHANRES_TYPES_HPP

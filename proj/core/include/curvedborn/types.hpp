#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvedborn {

/// Largest supported spacetime dimension. Charts are 3- or 4-dimensional.
inline constexpr int kMaxDim = 4;

// Fixed-capacity dynamic types keep per-point evaluation off the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

enum class ErrorKind {
  NonLorentzian,
  Singular,
  DifferentiationFailure,
  NotTimelike,
  PastDirected,
  ZeroVector,
  DegenerateImmersion,
  NotSpacelike,
  LeftChartDomain,
  StepSizeTooLarge,
  RootNotBracketable,
  SuperluminalVelocity,
  NonPositiveRescaling,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace tolerance {
// Units with c = 1.
inline constexpr double kCausal = 1e-9;
inline constexpr double kDeterminant = 1e-12;
inline constexpr double kFiniteDifference = 1e-5;
inline constexpr double kRoot = 1e-6;
inline constexpr double kTangency = 1e-10;
inline constexpr int kBracketSamples = 256;
}  // namespace tolerance

/// Central-difference step used for chart coordinate @p x.
inline double fd_step(double x) { return tolerance::kFiniteDifference * (1.0 + std::abs(x)); }

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace curvedborn

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latmaj/rational.hpp"

namespace latmaj {

enum class KernelKind { Quadratic, Power, Exponential, Variance, BinomialChoose, Tabulated };

/// A convex function on the nonnegative reals, evaluated at coincidences.
/// Immutable value type; parameters are validated on construction.
class ConvexKernel {
 public:
  static ConvexKernel quadratic();
  static ConvexKernel power(double exponent);
  static ConvexKernel exponential(double base);
  /// Exponential kernel with base (1 + sqrt 5) / 2.
  static ConvexKernel golden();
  /// (x - mean)^2 / m. The unbound form takes its mean and m from the
  /// design parameters via bind().
  static ConvexKernel variance();
  static ConvexKernel variance(Rational mean, std::int64_t m);
  /// C(x, j), zero for x < j.
  static ConvexKernel binomial_choose(int order);
  /// Values at 0, 1, ..., s; must have nonnegative second differences.
  static ConvexKernel tabulated(std::vector<double> values);

  KernelKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  int order() const noexcept { return order_; }
  const std::vector<double>& table() const noexcept { return table_; }
  bool needs_binding() const noexcept { return kind_ == KernelKind::Variance && !mean_; }

  /// Fills in design-dependent parameters (the variance kernel's β̄ and m).
  ConvexKernel bind(int n, int s, int q) const;

  double operator()(double x) const;

  /// Exact value at an integer argument, for kernels with rational values
  /// there (quadratic, variance, binomial choose).
  std::optional<Rational> exact(std::int64_t x) const;

  /// Canonical spec string in the CLI mini-language.
  std::string spec() const;

 private:
  ConvexKernel(KernelKind kind) : kind_(kind) {}

  KernelKind kind_;
  double param_ = 0.0;
  int order_ = 0;
  bool golden_ = false;
  std::optional<Rational> mean_;
  std::int64_t pair_count_ = 0;
  std::vector<double> table_;
};

inline double kernel_eval(const ConvexKernel& k, double x) { return k(x); }

/// Parses `variance`, `quadratic`, `power:<p>`, `power:pi`, `exp:<rho>`,
/// `exp:golden`, `choose:<j>` or `table:<v0,...,vs>`.
ConvexKernel parse_kernel_spec(std::string_view spec);

}  // namespace latmaj

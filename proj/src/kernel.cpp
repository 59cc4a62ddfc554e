#include "latmaj/kernel.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "latmaj/error.hpp"

namespace latmaj {

namespace {

std::string format_param(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

ConvexKernel ConvexKernel::quadratic() { return ConvexKernel(KernelKind::Quadratic); }

ConvexKernel ConvexKernel::power(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw Error(Errc::InvalidParameter, "power kernel needs exponent >= 1");
  }
  ConvexKernel k(KernelKind::Power);
  k.param_ = exponent;
  return k;
}

ConvexKernel ConvexKernel::exponential(double base) {
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw Error(Errc::InvalidParameter, "exponential kernel needs base > 1");
  }
  ConvexKernel k(KernelKind::Exponential);
  k.param_ = base;
  return k;
}

ConvexKernel ConvexKernel::golden() {
  ConvexKernel k = exponential(std::numbers::phi);
  k.golden_ = true;
  return k;
}

ConvexKernel ConvexKernel::variance() { return ConvexKernel(KernelKind::Variance); }

ConvexKernel ConvexKernel::variance(Rational mean, std::int64_t m) {
  if (m <= 0) throw Error(Errc::InvalidParameter, "variance kernel needs m > 0");
  ConvexKernel k(KernelKind::Variance);
  k.mean_ = std::move(mean);
  k.pair_count_ = m;
  k.param_ = to_double(*k.mean_);
  return k;
}

ConvexKernel ConvexKernel::binomial_choose(int order) {
  if (order < 1) throw Error(Errc::InvalidParameter, "choose kernel needs order j >= 1");
  ConvexKernel k(KernelKind::BinomialChoose);
  k.order_ = order;
  return k;
}

ConvexKernel ConvexKernel::tabulated(std::vector<double> values) {
  if (values.size() < 2) {
    throw Error(Errc::InvalidParameter, "table kernel needs values at 0 and 1 at least");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidParameter, "table kernel values must be finite");
  }
  for (std::size_t x = 1; x + 1 < values.size(); ++x) {
    const double second = values[x + 1] - 2.0 * values[x] + values[x - 1];
    const double scale = std::abs(values[x + 1]) + 2.0 * std::abs(values[x]) + std::abs(values[x - 1]);
    if (second < -1e-12 * std::max(1.0, scale)) {
      throw Error(Errc::InvalidParameter,
                  "table kernel is not convex at x=" + std::to_string(x));
    }
  }
  ConvexKernel k(KernelKind::Tabulated);
  k.table_ = std::move(values);
  return k;
}

ConvexKernel ConvexKernel::bind(int n, int s, int q) const {
  if (kind_ != KernelKind::Variance || mean_) return *this;
  if (n < 2 || q < 2) throw Error(Errc::InvalidParameter, "bind needs n >= 2 and q >= 2");
  const std::int64_t m = static_cast<std::int64_t>(n) * (n - 1) / 2;
  return variance(make_rational(static_cast<std::int64_t>(s) * (n - q),
                                static_cast<std::int64_t>(q) * (n - 1)),
                  m);
}

double ConvexKernel::operator()(double x) const {
  if (!(x >= 0.0)) throw Error(Errc::InvalidParameter, "kernels are defined on x >= 0");
  switch (kind_) {
    case KernelKind::Quadratic:
      return x * x;
    case KernelKind::Power:
      return std::pow(x, param_);
    case KernelKind::Exponential:
      return std::exp(x * std::log(param_));
    case KernelKind::Variance: {
      if (!mean_) {
        throw Error(Errc::InvalidParameter,
                    "variance kernel has no mean; bind it to (n, s, q) first");
      }
      const double d = x - param_;
      return d * d / static_cast<double>(pair_count_);
    }
    case KernelKind::BinomialChoose: {
      if (x < order_) return 0.0;
      double value = 1.0;
      for (int w = 0; w < order_; ++w) value *= (x - w) / (w + 1);
      return value;
    }
    case KernelKind::Tabulated: {
      const double top = static_cast<double>(table_.size() - 1);
      if (x > top) {
        throw Error(Errc::OutOfRange, "table kernel has no value beyond x=" + format_param(top));
      }
      const auto lo = static_cast<std::size_t>(std::floor(x));
      if (static_cast<double>(lo) == x) return table_[lo];
      const double w = x - static_cast<double>(lo);
      return (1.0 - w) * table_[lo] + w * table_[lo + 1];
    }
  }
  return 0.0;
}

std::optional<Rational> ConvexKernel::exact(std::int64_t x) const {
  switch (kind_) {
    case KernelKind::Quadratic:
      return Rational(x * x);
    case KernelKind::Variance: {
      if (!mean_) return std::nullopt;
      const Rational d = Rational(x) - *mean_;
      return d * d / pair_count_;
    }
    case KernelKind::BinomialChoose:
      return Rational(binom(x, order_));
    default:
      return std::nullopt;
  }
}

std::string ConvexKernel::spec() const {
  switch (kind_) {
    case KernelKind::Quadratic: return "quadratic";
    case KernelKind::Power: return "power:" + format_param(param_);
    case KernelKind::Exponential: return golden_ ? "exp:golden" : "exp:" + format_param(param_);
    case KernelKind::Variance: return "variance";
    case KernelKind::BinomialChoose: return "choose:" + std::to_string(order_);
    case KernelKind::Tabulated: {
      std::string out = "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) out += (i ? "," : "") + format_param(table_[i]);
      return out;
    }
  }
  return {};
}

namespace {

[[noreturn]] void syntax_error(std::string_view spec, std::size_t pos, const std::string& what) {
  throw Error(Errc::KernelSyntax, "kernel spec '" + std::string(spec) + "': " + what +
                                      " at position " + std::to_string(pos + 1));
}

std::vector<double> parse_params(std::string_view spec, std::size_t start) {
  std::vector<double> out;
  std::size_t pos = start;
  while (true) {
    const std::size_t end = std::min(spec.find(',', pos), spec.size());
    const std::string_view tok = spec.substr(pos, end - pos);
    if (tok.empty()) syntax_error(spec, pos, "expected a decimal number");
    double value = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      syntax_error(spec, pos + static_cast<std::size_t>(res.ptr - tok.data()),
                   "malformed number '" + std::string(tok) + "'");
    }
    out.push_back(value);
    if (end == spec.size()) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace

ConvexKernel parse_kernel_spec(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] < 'a' || name[i] > 'z') syntax_error(spec, i, "kernel names are lowercase letters");
  }
  const bool has_args = colon != std::string_view::npos;
  const std::size_t arg_pos = has_args ? colon + 1 : spec.size();
  const std::string_view args = has_args ? spec.substr(arg_pos) : std::string_view{};

  auto no_args = [&] {
    if (has_args) syntax_error(spec, colon, "kernel '" + std::string(name) + "' takes no parameters");
  };
  auto one_arg = [&]() -> double {
    if (!has_args) syntax_error(spec, spec.size(), "missing ':<parameter>'");
    const auto params = parse_params(spec, arg_pos);
    if (params.size() != 1) syntax_error(spec, arg_pos, "expected exactly one parameter");
    return params.front();
  };

  if (name == "quadratic") {
    no_args();
    return ConvexKernel::quadratic();
  }
  if (name == "variance") {
    no_args();
    return ConvexKernel::variance();
  }
  if (name == "power") {
    if (args == "pi") return ConvexKernel::power(std::numbers::pi);
    return ConvexKernel::power(one_arg());
  }
  if (name == "exp") {
    if (args == "golden") return ConvexKernel::golden();
    return ConvexKernel::exponential(one_arg());
  }
  if (name == "choose") {
    const double j = one_arg();
    if (j != std::floor(j)) syntax_error(spec, arg_pos, "choose order must be an integer");
    return ConvexKernel::binomial_choose(static_cast<int>(j));
  }
  if (name == "table") {
    if (!has_args) syntax_error(spec, spec.size(), "missing ':<v0,v1,...>'");
    return ConvexKernel::tabulated(parse_params(spec, arg_pos));
  }
  syntax_error(spec, 0, "unknown kernel '" + std::string(name) + "'");
}

}  // namespace latmaj

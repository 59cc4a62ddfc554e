#include "latmaj/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include "latmaj/error.hpp"
#include "latmaj/kernel.hpp"
#include "latmaj/majorization.hpp"
#include "latmaj/schur.hpp"

namespace latmaj {

namespace {

/// table[j][x] = P_j(x; s, q) for j, x in 0..s.
std::vector<std::vector<BigInt>> krawtchouk_table(int s, int q) {
  std::vector<std::vector<BigInt>> table(s + 1, std::vector<BigInt>(s + 1));
  for (int j = 0; j <= s; ++j)
    for (int x = 0; x <= s; ++x) table[j][x] = krawtchouk(j, x, s, q);
  return table;
}

void for_each_combination(int s, int j, const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> idx(j);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int pos = j - 1;
    while (pos >= 0 && idx[pos] == s - j + pos) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int r = pos + 1; r < j; ++r) idx[r] = idx[r - 1] + 1;
  }
}

void require_two_factors(const Design& d) {
  if (d.factors() < 2) {
    throw Error(Errc::TooFewFactors, "two-factor criteria need s >= 2");
  }
}

double pow_int(double base, int e) { return std::pow(base, e); }

}  // namespace

BigInt krawtchouk(int j, int x, int s, int q) {
  if (s < 0 || j < 0 || j > s || x < 0 || x > s || q < 2) {
    throw Error(Errc::OutOfRange, "Krawtchouk P_" + std::to_string(j) + "(" + std::to_string(x) +
                                      "; " + std::to_string(s) + ", " + std::to_string(q) +
                                      ") out of range");
  }
  BigInt total = 0;
  for (int w = 0; w <= j; ++w) {
    BigInt term = ipow(q - 1, j - w) * binom(x, w) * binom(s - x, j - w);
    if (w % 2) total -= term;
    else total += term;
  }
  return total;
}

DistanceDistribution distance_distribution(const Design& d) {
  const int n = d.runs(), s = d.factors();
  std::vector<std::int64_t> counts(s + 1, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      int agree = 0;
      for (int j = 0; j < s; ++j) agree += d(i, j) == d(k, j);
      ++counts[s - agree];
    }
  DistanceDistribution out;
  out.E.reserve(s + 1);
  for (int l = 0; l <= s; ++l) out.E.push_back(make_rational(counts[l], n));
  return out;
}

WordLengthPattern gwp_macwilliams(const Design& d) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  const auto P = krawtchouk_table(s, q);
  const DistanceDistribution dist = distance_distribution(d);
  WordLengthPattern out;
  for (int j = 1; j <= s; ++j) {
    Rational a = 0;
    for (int l = 0; l <= s; ++l) a += dist.E[l] * P[j][l];
    a /= n;
    out.A.push_back(to_double(a));
    out.exact.push_back(std::move(a));
  }
  return out;
}

WordLengthPattern gwp(const Design& d) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  const auto P = krawtchouk_table(s, q);
  const auto counts = pc_vector(d).histogram(s);
  WordLengthPattern out;
  for (int j = 1; j <= s; ++j) {
    BigInt pairs = 0;
    for (int v = 0; v <= s; ++v) pairs += P[j][s - v] * counts[v];
    Rational a = Rational(2 * pairs, BigInt(n) * n) + Rational(ipow(q - 1, j) * binom(s, j), BigInt(n));
    out.A.push_back(to_double(a));
    out.exact.push_back(std::move(a));
  }
  const WordLengthPattern other = gwp_macwilliams(d);
  if (other.exact != out.exact) {
    throw Error(Errc::RouteMismatch, "coincidence and distance-distribution word-length patterns differ");
  }
  return out;
}

std::string_view to_string(Aberration a) noexcept {
  switch (a) {
    case Aberration::Precedes: return "precedes";
    case Aberration::Equal: return "equal";
    case Aberration::Succeeds: return "succeeds";
  }
  return "equal";
}

Aberration aberration_order(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::LengthMismatch, "word-length patterns have different lengths");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = x[j] - y[j];
    if (diff < -1e-9) return Aberration::Precedes;
    if (diff > 1e-9) return Aberration::Succeeds;
  }
  return Aberration::Equal;
}

Rational psi_combinatorial(const Design& d, int j) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  if (j < 1 || j > s) {
    throw Error(Errc::OutOfRange, "order j=" + std::to_string(j) + " outside 1.." + std::to_string(s));
  }
  const auto counts = pc_vector(d).histogram(s);
  BigInt pairs = 0;
  for (int v = j; v <= s; ++v) pairs += binom(v, j) * counts[v];
  return Rational(2 * pairs) -
         Rational(binom(s, j)) * (Rational(BigInt(n) * n, ipow(q, j)) - n);
}

Rational projection_counts_oracle(const Design& d, int j) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  if (j < 1 || j > s) {
    throw Error(Errc::OutOfRange, "order j=" + std::to_string(j) + " outside 1.." + std::to_string(s));
  }
  const BigInt cells = ipow(q, j);
  BigInt scaled = 0;  // Σ (q^j N - n)² over every cell of every projection
  std::vector<std::vector<int>> keys(n);
  for_each_combination(s, j, [&](std::span<const int> cols) {
    for (int i = 0; i < n; ++i) {
      keys[i].resize(cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) keys[i][c] = d(i, cols[c]);
    }
    std::sort(keys.begin(), keys.end());
    BigInt occupied = 0;
    for (int i = 0; i < n;) {
      int next = i;
      while (next < n && keys[next] == keys[i]) ++next;
      const BigInt dev = cells * (next - i) - n;
      scaled += dev * dev;
      ++occupied;
      i = next;
    }
    // Empty cells each contribute (0 - n)².
    scaled += (cells - occupied) * BigInt(n) * n;
  });
  return Rational(scaled, cells * cells);
}

DeviationPattern deviation_pattern(const Design& d) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  const WordLengthPattern pattern = gwp(d);
  DeviationPattern out;
  for (int j = 1; j <= s; ++j) {
    Rational psi = psi_combinatorial(d, j);
    const Rational squared = psi / ipow(q, j);
    Rational linear = 0;
    for (int k = 1; k <= j; ++k) linear += Rational(binom(s - k, j - k)) * pattern.exact[k - 1];
    linear *= Rational(BigInt(n) * n, ipow(q, 2 * j));
    if (linear != squared) {
      throw Error(Errc::RelationMismatch, "deviation/word-length relation fails at j=" + std::to_string(j));
    }
    out.B.push_back(std::sqrt(to_double(squared)));
    out.psiC.push_back(std::move(psi));
  }
  return out;
}

PatternBenchmarks pattern_benchmarks(int n, int s, int q) {
  const PCBenchmark bench = benchmark_pc(n, s, q);
  const auto theta = static_cast<int>(bench.theta);
  const Rational& f = bench.frac;
  PatternBenchmarks out;
  for (int j = 1; j <= s; ++j) {
    Rational a = (Rational(1) - Rational(1, n)) *
                     ((Rational(1) - f) * krawtchouk(j, s - theta, s, q) +
                      f * krawtchouk(j, s - theta - 1 >= 0 ? s - theta - 1 : 0, s, q)) +
                 Rational(ipow(q - 1, j) * binom(s, j), BigInt(n));
    out.Astar.push_back(to_double(a));
    out.Astar_exact.push_back(std::move(a));

    const BigInt qj = ipow(q, j);
    Rational radicand =
        Rational(BigInt(n) * (n - 1), qj) * (Rational(binom(theta, j)) + f * binom(theta, j - 1)) -
        Rational(binom(s, j)) * (Rational(BigInt(n) * n, qj * qj) - Rational(BigInt(n), qj));
    out.Bstar.push_back(radicand > 0 ? std::sqrt(to_double(radicand)) : 0.0);
    out.Bstar_squared.push_back(std::move(radicand));
  }
  return out;
}

Rational ave_chi2_offset(int n, int s, int q) {
  return Rational(BigInt(q) * q * n * s + BigInt(n) * n * (1 - s - q), BigInt(q) * q * (s - 1));
}

Rational ave_chi2_exact(const Design& d) {
  require_two_factors(d);
  const int n = d.runs(), s = d.factors(), q = d.levels();
  const auto counts = pc_vector(d).histogram(s);
  BigInt squares = 0;
  for (int v = 0; v <= s; ++v) squares += BigInt(v) * v * counts[v];
  Rational value = Rational(2 * squares, BigInt(s) * (s - 1)) + ave_chi2_offset(n, s, q);
  if (value != ave_chi2_direct(d)) {
    throw Error(Errc::RouteMismatch, "Ave(chi2) identity disagrees with direct cell counts");
  }
  return value;
}

double ave_chi2(const Design& d) { return to_double(ave_chi2_exact(d)); }

Rational ave_chi2_direct(const Design& d) {
  require_two_factors(d);
  const int n = d.runs(), s = d.factors(), q = d.levels();
  BigInt scaled = 0;  // Σ (q² N - n)²
  std::vector<int> cells(static_cast<std::size_t>(q) * q);
  for (int j = 0; j < s; ++j)
    for (int l = j + 1; l < s; ++l) {
      std::fill(cells.begin(), cells.end(), 0);
      for (int i = 0; i < n; ++i) ++cells[d(i, j) * q + d(i, l)];
      for (int c : cells) {
        const BigInt dev = BigInt(q) * q * c - n;
        scaled += dev * dev;
      }
    }
  return Rational(2 * scaled, BigInt(s) * (s - 1) * ipow(q, 4));
}

Rational ave_chi2_bound(int n, int s, int q) {
  if (s < 2) throw Error(Errc::TooFewFactors, "two-factor criteria need s >= 2");
  const PCBenchmark b = benchmark_pc(n, s, q);
  const Rational theta(b.theta);
  return Rational(BigInt(n) * (n - 1), BigInt(s) * (s - 1)) *
             (theta * theta + 2 * theta * b.frac + b.frac) +
         ave_chi2_offset(n, s, q);
}

Rational ave_chi2_integer_mean_bound(int n, int s, int q) {
  if (s < 2) throw Error(Errc::TooFewFactors, "two-factor criteria need s >= 2");
  return Rational(BigInt(n) * n * (q - 1) * (BigInt(q - 1) * s - n + 1),
                  BigInt(q) * q * (s - 1) * (n - 1));
}

std::optional<double> ave_chi2_three_level(const Design& d) {
  if (d.levels() != 3 || d.factors() < 2) return std::nullopt;
  return to_double(ave_chi2_exact(d) * 9 / d.runs());
}

Rational e_s2_exact(const Design& d) {
  require_two_factors(d);
  if (d.levels() != 2) throw Error(Errc::WrongLevelCount, "E(s^2) is defined for two-level designs");
  const int n = d.runs(), s = d.factors();
  BigInt total = 0;
  for (int j = 0; j < s; ++j)
    for (int l = j + 1; l < s; ++l) {
      std::int64_t inner = 0;
      for (int i = 0; i < n; ++i) inner += (2 * d(i, j) - 1) * (2 * d(i, l) - 1);
      total += BigInt(inner) * inner;
    }
  Rational value(2 * total, BigInt(s) * (s - 1));
  if (value != 4 * ave_chi2_exact(d)) {
    throw Error(Errc::RouteMismatch, "E(s^2) is not 4 Ave(chi2)");
  }
  return value;
}

double e_s2(const Design& d) { return to_double(e_s2_exact(d)); }

Rational e_s2_bound(int n, int s) { return 4 * ave_chi2_bound(n, s, 2); }

Rational e_s2_integer_mean_bound(int n, int s) {
  if (s < 2) throw Error(Errc::TooFewFactors, "two-factor criteria need s >= 2");
  return Rational(BigInt(n) * n * (s - n + 1), BigInt(s - 1) * (n - 1));
}

DiscrepancyParams DiscrepancyParams::make(double a, double b, int q) {
  if (q < 2) throw Error(Errc::InvalidDiscrepancyParams, "q must be at least 2");
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(Errc::InvalidDiscrepancyParams, "discrepancy parameter a must be positive");
  }
  if (!std::isfinite(b) || !(b * (q - 1) >= -a) || !(b < a)) {
    throw Error(Errc::InvalidDiscrepancyParams,
                "discrepancy parameter b must lie in [-a/(q-1), a)");
  }
  return DiscrepancyParams{a, b, q};
}

std::optional<std::string> DiscrepancyParams::warning() const {
  if (a >= q - 1) return "a >= q - 1: outside the range assumed by the lower-bound derivation";
  return std::nullopt;
}

DiscrepancyValue categorical_discrepancy(const Design& d, const DiscrepancyParams& p) {
  const DiscrepancyParams checked = DiscrepancyParams::make(p.a, p.b, d.levels());
  const int n = d.runs(), s = d.factors();
  const double rho = checked.rho();
  const PCVector pc = pc_vector(d);
  const double psi_e = schur_sum(pc, ConvexKernel::exponential(rho));
  const double scale = std::pow(1.0 + checked.b, s);
  const double tail = std::pow(1.0 + checked.a, s) / n - std::pow(1.0 + checked.mu(), s);

  DiscrepancyValue out;
  out.squared = 2.0 * psi_e / (static_cast<double>(n) * n) * scale + tail;
  out.value = std::sqrt(std::max(0.0, out.squared));
  const double f = to_double(pc.frac);
  out.bound_squared = ((n - 1) * (1.0 - f + rho * f) * pow_int(rho, static_cast<int>(pc.theta)) * scale +
                       std::pow(1.0 + checked.a, s)) /
                          n -
                      std::pow(1.0 + checked.mu(), s);
  out.warning = checked.warning();
  return out;
}

double categorical_discrepancy_direct(const Design& d, const DiscrepancyParams& p) {
  const DiscrepancyParams checked = DiscrepancyParams::make(p.a, p.b, d.levels());
  const int n = d.runs(), s = d.factors();
  if (s > 20) throw Error(Errc::OutOfRange, "direct discrepancy enumeration needs s <= 20");
  const double a = checked.a, b = checked.b, mu = checked.mu();
  double total = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
    double kernel_sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double prod = 1.0;
        for (int j = 0; j < s; ++j)
          if (mask & (1u << j)) prod *= b + (a - b) * (d(i, j) == d(k, j) ? 1.0 : 0.0);
        kernel_sum += prod;
      }
    total += -std::pow(mu, std::popcount(mask)) + kernel_sum / (static_cast<double>(n) * n);
  }
  return total;
}

std::string_view to_string(L2Kind k) noexcept {
  return k == L2Kind::Centered ? "CL2" : "WL2";
}

bool l2_supported(L2Kind kind, int q) noexcept {
  return kind == L2Kind::Centered ? q == 2 : (q == 2 || q == 3);
}

DiscrepancyValue l2_discrepancy(const Design& d, L2Kind kind) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  if (!l2_supported(kind, q)) {
    throw Error(Errc::UnsupportedLevelCount,
                std::string(to_string(kind)) + " has no coincidence identity for q=" + std::to_string(q));
  }
  const PCVector pc = pc_vector(d);
  const double f = to_double(pc.frac);
  const int theta = static_cast<int>(pc.theta);
  const double nn = static_cast<double>(n) * n;
  DiscrepancyValue out;
  if (kind == L2Kind::Centered) {
    const double a1 = std::pow(1.25, s) / n + std::pow(13.0 / 12.0, s) - 2.0 * std::pow(35.0 / 32.0, s);
    out.squared = a1 + 2.0 * schur_sum(pc, ConvexKernel::exponential(1.25)) / nn;
    out.bound_squared = a1 + (n - 1) * (4.0 + f) / (4.0 * n) * pow_int(1.25, theta);
  } else {
    const double a2 = std::pow(1.5, s) / n - std::pow(4.0 / 3.0, s);
    if (q == 2) {
      const double scale = std::pow(1.25, s);
      out.squared = a2 + 2.0 * schur_sum(pc, ConvexKernel::exponential(1.2)) / nn * scale;
      out.bound_squared = a2 + (n - 1) * (5.0 + f) / (5.0 * n) * scale * pow_int(1.2, theta);
    } else {
      const double scale = std::pow(23.0 / 18.0, s);
      out.squared = a2 + 2.0 * schur_sum(pc, ConvexKernel::exponential(27.0 / 23.0)) / nn * scale;
      out.bound_squared =
          a2 + (n - 1) * (23.0 + 4.0 * f) / (23.0 * n) * scale * pow_int(27.0 / 23.0, theta);
    }
  }
  out.value = std::sqrt(std::max(0.0, out.squared));
  return out;
}

CriterionReport criterion_report(const Design& d, std::optional<DiscrepancyParams> categorical) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  CriterionReport r;
  r.n = n;
  r.s = s;
  r.q = q;
  for (const char* spec : {"variance", "quadratic", "power:pi", "exp:golden"}) {
    const SchurValue v = schur_psi(d, parse_kernel_spec(spec));
    r.schur.push_back({spec, v.value, v.bound});
  }
  r.gwp = gwp(d);
  r.deviation = deviation_pattern(d);
  r.benchmarks = pattern_benchmarks(n, s, q);
  if (s >= 2) {
    r.ave_chi2 = ave_chi2(d);
    r.ave_chi2_bound = to_double(ave_chi2_bound(n, s, q));
    r.ave_chi2_three_level = ave_chi2_three_level(d);
    if (q == 2) {
      r.e_s2 = e_s2(d);
      r.e_s2_bound = to_double(e_s2_bound(n, s));
    }
  }
  if (categorical) {
    r.categorical_params = DiscrepancyParams::make(categorical->a, categorical->b, q);
    r.categorical = categorical_discrepancy(d, *r.categorical_params);
  }
  if (l2_supported(L2Kind::Centered, q)) r.cl2 = l2_discrepancy(d, L2Kind::Centered);
  if (l2_supported(L2Kind::WrapAround, q)) r.wl2 = l2_discrepancy(d, L2Kind::WrapAround);
  return r;
}

}  // namespace latmaj

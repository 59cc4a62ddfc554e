#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latmaj/design.hpp"

namespace latmaj {

// ---------------------------------------------------------------------------
// Krawtchouk machinery and aberration

/// P_j(x; s, q) = Σ_w (-1)^w (q-1)^(j-w) C(x, w) C(s-x, j-w), exactly.
BigInt krawtchouk(int j, int x, int s, int q);

/// E_l = |{(i,k) ordered, diagonal included : β(x_i,x_k) = s-l}| / n.
struct DistanceDistribution {
  std::vector<Rational> E;  // E_0..E_s
};

DistanceDistribution distance_distribution(const Design& d);

/// Generalized word-length pattern A_1..A_s.
struct WordLengthPattern {
  std::vector<Rational> exact;
  std::vector<double> A;
};

/// PC route: A_j = (2/n²) Σ_r P_j(s-β_r) + (q-1)^j C(s,j)/n. The MacWilliams
/// route is evaluated alongside; disagreement raises RouteMismatch.
WordLengthPattern gwp(const Design& d);
/// A_j = (1/n) Σ_l E_l P_j(l).
WordLengthPattern gwp_macwilliams(const Design& d);

enum class Aberration { Precedes, Equal, Succeeds };
std::string_view to_string(Aberration a) noexcept;

/// Sign of the first difference larger than 1e-9 in magnitude.
Aberration aberration_order(std::span<const double> x, std::span<const double> y);
inline Aberration aberration_order(const WordLengthPattern& x, const WordLengthPattern& y) {
  return aberration_order(x.A, y.A);
}

// ---------------------------------------------------------------------------
// Schur-combinatorial criterion and deviation pattern

/// Ψ_C(X; j) = 2 Σ_r C(β_r, j) - C(s, j)(n²/q^j - n).
Rational psi_combinatorial(const Design& d, int j);

/// Σ over all j-column projections and all q^j cells of (N - n/q^j)².
Rational projection_counts_oracle(const Design& d, int j);

struct DeviationPattern {
  std::vector<Rational> psiC;  // Ψ_C(X; j), j = 1..s
  std::vector<double> B;       // sqrt(Ψ_C / q^j)
};

/// Also checks B_j² = (n²/q^{2j}) Σ_{k≤j} C(s-k, j-k) A_k exactly
/// (RelationMismatch on failure).
DeviationPattern deviation_pattern(const Design& d);

struct PatternBenchmarks {
  std::vector<Rational> Astar_exact;  // A*_1..A*_s (A*_1 = 0)
  std::vector<double> Astar;
  std::vector<Rational> Bstar_squared;  // radicand of B*_j, may be negative
  std::vector<double> Bstar;            // sqrt(max(0, radicand))
};

PatternBenchmarks pattern_benchmarks(int n, int s, int q);

// ---------------------------------------------------------------------------
// Two-factor nonorthogonality

/// (2/(s(s-1))) Σ_{j<l} Σ_{τ1,τ2} (N - n/q²)², by the quadratic-kernel identity
/// (2/(s(s-1))) Σ β_r² + a. Checked against direct cell counts.
Rational ave_chi2_exact(const Design& d);
double ave_chi2(const Design& d);
/// Cell-count route.
Rational ave_chi2_direct(const Design& d);

/// a = (q² n s + n²(1 - s - q)) / (q²(s - 1)).
Rational ave_chi2_offset(int n, int s, int q);

/// n(n-1)/(s(s-1)) (θ² + 2θf + f) + a.
Rational ave_chi2_bound(int n, int s, int q);

/// Closed form of the bound when the PC mean is an integer:
/// n²(q-1)((q-1)s - n + 1) / (q²(s-1)(n-1)).
Rational ave_chi2_integer_mean_bound(int n, int s, int q);

/// Three-level rescaling (×9/n); nullopt unless q = 3.
std::optional<double> ave_chi2_three_level(const Design& d);

/// (2/(s(s-1))) Σ_{j<l} (c_j · c_l)² with levels {0,1} coded as {-1,+1};
/// q = 2 only. Equals 4·Ave(χ²) (RouteMismatch otherwise).
Rational e_s2_exact(const Design& d);
double e_s2(const Design& d);
Rational e_s2_bound(int n, int s);
/// n²(s - n + 1) / ((s - 1)(n - 1)), the integer-mean closed form.
Rational e_s2_integer_mean_bound(int n, int s);

// ---------------------------------------------------------------------------
// Discrepancies

/// Categorical hat-kernel parameters: a > 0 and -a/(q-1) <= b < a.
struct DiscrepancyParams {
  double a = 1.0;
  double b = 0.0;
  int q = 2;

  static DiscrepancyParams make(double a, double b, int q);
  double mu() const noexcept { return (a + (q - 1) * b) / q; }
  double rho() const noexcept { return (1.0 + a) / (1.0 + b); }
  /// Set when a >= q - 1, a region some derivations exclude.
  std::optional<std::string> warning() const;
};

struct DiscrepancyValue {
  double squared = 0.0;
  double value = 0.0;          // sqrt(max(0, squared))
  double bound_squared = 0.0;  // lower bound on `squared`
  std::optional<std::string> warning;
};

/// D²(X; a∨b) = 2Ψ_E(X; ρ)/n² + (1+a)^s/n - (1+μ)^s.
DiscrepancyValue categorical_discrepancy(const Design& d, const DiscrepancyParams& p);

/// Definition route: Σ over nonempty column subsets u of
/// -μ^|u| + n⁻² Σ_{i,k} Π_{j∈u} (b + (a-b)δ). Requires s <= 20.
double categorical_discrepancy_direct(const Design& d, const DiscrepancyParams& p);

enum class L2Kind { Centered, WrapAround };
std::string_view to_string(L2Kind k) noexcept;

/// CL2 for q = 2; WL2 for q in {2, 3}. Otherwise UnsupportedLevelCount.
DiscrepancyValue l2_discrepancy(const Design& d, L2Kind kind);
bool l2_supported(L2Kind kind, int q) noexcept;

// ---------------------------------------------------------------------------

struct SchurEntry {
  std::string kernel;
  double value = 0.0;
  double bound = 0.0;
};

/// Every criterion of one design with its benchmark.
struct CriterionReport {
  int n = 0, s = 0, q = 0;
  std::vector<SchurEntry> schur;
  WordLengthPattern gwp;
  DeviationPattern deviation;
  PatternBenchmarks benchmarks;
  std::optional<double> ave_chi2;
  std::optional<double> ave_chi2_bound;
  std::optional<double> ave_chi2_three_level;
  std::optional<double> e_s2;
  std::optional<double> e_s2_bound;
  std::optional<DiscrepancyParams> categorical_params;
  std::optional<DiscrepancyValue> categorical;
  std::optional<DiscrepancyValue> cl2;
  std::optional<DiscrepancyValue> wl2;
};

CriterionReport criterion_report(const Design& d,
                                 std::optional<DiscrepancyParams> categorical = std::nullopt);

}  // namespace latmaj

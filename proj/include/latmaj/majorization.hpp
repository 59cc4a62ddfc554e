#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "latmaj/design.hpp"

namespace latmaj {

enum class Relation {
  EqualAsMultisets,
  LeftMajorizedStrict,   // left ≺ right
  RightMajorizedStrict,  // right ≺ left
  // Weak-but-not-equal needs equal prefix sums everywhere with different
  // multisets, which cannot happen on sorted integer vectors. Kept so the
  // relation set is closed under the general definition.
  LeftMajorizedWeak,
  RightMajorizedWeak,
  Incomparable,
};

std::string_view to_string(Relation r) noexcept;

struct MajorizationRelation {
  Relation tag = Relation::Incomparable;
  /// Smallest 1-based prefix length with a strict inequality (strict tags only).
  std::optional<std::int64_t> witness;

  /// left ⪯ right
  bool left_weakly_majorized() const noexcept {
    return tag == Relation::EqualAsMultisets || tag == Relation::LeftMajorizedStrict ||
           tag == Relation::LeftMajorizedWeak;
  }
};

/// Running sums of the increasing order statistic.
std::vector<std::int64_t> prefix_sums(std::span<const int> sorted);

/// Exact prefix-sum comparison of the sorted vectors.
MajorizationRelation compare_pc(const PCVector& x, const PCVector& y);

struct PoolClassification {
  std::vector<std::size_t> admissible;
  /// (inadmissible index, smallest index whose PC vector strictly majorizes into it)
  std::vector<std::pair<std::size_t, std::size_t>> inadmissible;
  /// Every index weakly majorized by all others; `majorant` is the first.
  std::vector<std::size_t> majorants;
  std::optional<std::size_t> majorant;
};

PoolClassification classify_pool(std::span<const PCVector> pool);
PoolClassification classify_pool(std::span<const Design> pool);

/// The flattest integer PC vector for U(n, q^s): m(1-f) copies of θ
/// followed by mf copies of θ+1.
struct PCBenchmark {
  std::int64_t m = 0;
  Rational bar;
  std::int64_t theta = 0;
  Rational frac;
  std::int64_t count_theta = 0;       // m(1-f)
  std::int64_t count_theta_next = 0;  // mf
  std::vector<int> tilde;

  PCVector as_pc() const { return PCVector::from_values(tilde); }
};

PCBenchmark benchmark_pc(int n, int s, int q);

}  // namespace latmaj

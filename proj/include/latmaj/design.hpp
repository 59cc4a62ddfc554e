#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latmaj/rational.hpp"

namespace latmaj {

/// n x s grid of levels. Row-major so that a run is contiguous.
using LevelMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Symmetric n x n matrix of pairwise coincidences with s on the diagonal.
using CoincidenceMatrix = Eigen::MatrixXi;

/// A balanced (U-type) lattice design U(n, q^s). Construction validates every
/// invariant, so a Design value is always balanced. Indices are 0-based.
class Design {
 public:
  Design(LevelMatrix levels, int q, std::string label = {},
         std::vector<std::string> column_names = {});

  int runs() const noexcept { return static_cast<int>(levels_.rows()); }
  int factors() const noexcept { return static_cast<int>(levels_.cols()); }
  int levels() const noexcept { return q_; }
  const LevelMatrix& matrix() const noexcept { return levels_; }
  int operator()(int run, int factor) const { return levels_(run, factor); }

  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Optional per-column display names (empty when the source had none).
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  std::string column_name(int factor) const;

  friend bool operator==(const Design& a, const Design& b) {
    return a.q_ == b.q_ && a.levels_ == b.levels_;
  }

 private:
  LevelMatrix levels_;
  int q_;
  std::string label_;
  std::vector<std::string> column_names_;
};

/// Pairwise-coincidence vector in the fixed (i,k), i<k pair order.
struct PCVector {
  std::vector<int> values;
  std::vector<int> sorted;
  std::int64_t m = 0;
  std::int64_t sum = 0;
  Rational mean;
  std::int64_t theta = 0;
  Rational frac;

  /// Builds the summary from raw coincidences. The mean is sum/m.
  static PCVector from_values(std::vector<int> values);

  /// counts[v] = number of entries equal to v, for v = 0..max(max entry, top).
  std::vector<std::int64_t> histogram(int top = 0) const;
};

/// 0-based position of the pair (i,k), i<k, among the n(n-1)/2 pairs.
/// The 1-based form is n(i-1) + k - i(i+1)/2.
constexpr std::int64_t pair_index(std::int64_t i, std::int64_t k, std::int64_t n) {
  const std::int64_t i1 = i + 1, k1 = k + 1;
  return n * (i1 - 1) + k1 - i1 * (i1 + 1) / 2 - 1;
}

/// Number of positions where two runs agree.
int coincidence(const Design& d, int i, int k);

PCVector pc_vector(const Design& d);
CoincidenceMatrix coincidence_matrix(const Design& d);

/// Sub-design keeping the given strictly increasing 0-based columns.
Design project(const Design& d, std::span<const int> cols);

/// Each column an independent Fisher-Yates shuffle of the balanced multiset,
/// drawn from the counter stream keyed by (seed, column).
Design random_balanced(int n, int s, int q, std::uint64_t seed);

enum class Equidistance { Equidistant, WeakEquidistant, Neither };
std::string_view to_string(Equidistance e) noexcept;
Equidistance equidistance_class(const Design& d);

/// Parses the whitespace-delimited design format. Blank lines and '#' lines
/// are skipped; a leading `#q=<int>` directive sets q and `# columns: A B ...`
/// names the columns. An explicit `q` overrides the directive; when neither
/// is present q is one more than the largest level.
Design parse_design(std::string_view text, std::optional<int> q = std::nullopt);
Design read_design_file(const std::string& path, std::optional<int> q = std::nullopt);

/// Writes the design with a `#q=` directive (and column names if present).
std::string format_design(const Design& d);
void write_design_file(const std::string& path, const Design& d);

}  // namespace latmaj

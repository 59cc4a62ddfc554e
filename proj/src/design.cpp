#include "latmaj/design.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "latmaj/error.hpp"
#include "latmaj/random.hpp"

namespace latmaj {

namespace {

std::string col_label(int j) { return "column " + std::to_string(j + 1); }

void validate(const LevelMatrix& levels, int q) {
  const auto n = levels.rows();
  const auto s = levels.cols();
  if (q < 2) throw Error(Errc::InvalidParameter, "level count q must be at least 2");
  if (n < 2) throw Error(Errc::TooFewRuns, "a design needs at least two runs");
  if (s < 1) throw Error(Errc::ParseError, "a design needs at least one factor");
  if (n % q != 0) {
    throw Error(Errc::QNotDividingN,
                "q=" + std::to_string(q) + " does not divide n=" + std::to_string(n));
  }
  for (Eigen::Index j = 0; j < s; ++j) {
    std::vector<Eigen::Index> counts(q, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int v = levels(i, j);
      if (v < 0 || v >= q) {
        throw Error(Errc::LevelOutOfRange, "level " + std::to_string(v) + " at run " +
                                               std::to_string(i + 1) + ", " +
                                               col_label(static_cast<int>(j)) +
                                               " outside 0.." + std::to_string(q - 1));
      }
      ++counts[v];
    }
    for (int v = 0; v < q; ++v) {
      if (counts[v] != n / q) {
        throw Error(Errc::Unbalanced, col_label(static_cast<int>(j)) + ": level " +
                                          std::to_string(v) + " appears " +
                                          std::to_string(counts[v]) + " times, expected " +
                                          std::to_string(n / q));
      }
    }
  }
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '\r') ++pos;
    if (pos > start) out.push_back(s.substr(start, pos - start));
  }
  return out;
}

}  // namespace

Design::Design(LevelMatrix levels, int q, std::string label,
               std::vector<std::string> column_names)
    : levels_(std::move(levels)),
      q_(q),
      label_(std::move(label)),
      column_names_(std::move(column_names)) {
  validate(levels_, q_);
  if (!column_names_.empty() && static_cast<int>(column_names_.size()) != factors()) {
    column_names_.clear();
  }
}

std::string Design::column_name(int factor) const {
  if (!column_names_.empty()) return column_names_[factor];
  return std::to_string(factor + 1);
}

PCVector PCVector::from_values(std::vector<int> values) {
  PCVector pc;
  pc.m = static_cast<std::int64_t>(values.size());
  if (pc.m == 0) throw Error(Errc::LengthMismatch, "empty coincidence vector");
  pc.sum = std::accumulate(values.begin(), values.end(), std::int64_t{0});
  pc.sorted = values;
  std::sort(pc.sorted.begin(), pc.sorted.end());
  pc.values = std::move(values);
  pc.mean = make_rational(pc.sum, pc.m);
  pc.theta = pc.sum / pc.m;
  pc.frac = pc.mean - pc.theta;
  return pc;
}

std::vector<std::int64_t> PCVector::histogram(int top) const {
  const int hi = std::max(top, sorted.empty() ? 0 : sorted.back());
  std::vector<std::int64_t> counts(hi + 1, 0);
  for (int v : values) ++counts[v];
  return counts;
}

int coincidence(const Design& d, int i, int k) {
  return static_cast<int>((d.matrix().row(i).array() == d.matrix().row(k).array()).count());
}

CoincidenceMatrix coincidence_matrix(const Design& d) {
  const int n = d.runs(), s = d.factors(), q = d.levels();
  // One-hot indicator of every (factor, level) cell; M = Z Z^T.
  Eigen::MatrixXi indicator = Eigen::MatrixXi::Zero(n, s * q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < s; ++j) indicator(i, j * q + d(i, j)) = 1;
  return indicator * indicator.transpose();
}

PCVector pc_vector(const Design& d) {
  const int n = d.runs();
  const CoincidenceMatrix M = coincidence_matrix(d);
  std::vector<int> values(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) values[pair_index(i, k, n)] = M(i, k);
  PCVector pc = PCVector::from_values(std::move(values));
  // Lemma 1: the PC-sum of any balanced design is (ns/2)(n/q - 1).
  const std::int64_t expected =
      static_cast<std::int64_t>(n) * d.factors() * (n / d.levels() - 1) / 2;
  if (pc.sum != expected) {
    throw Error(Errc::SumMismatch, "PC-sum " + std::to_string(pc.sum) +
                                       " violates the balanced-design identity " +
                                       std::to_string(expected));
  }
  return pc;
}

Design project(const Design& d, std::span<const int> cols) {
  if (cols.empty()) throw Error(Errc::EmptySubset, "projection needs at least one column");
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] < 0 || cols[c] >= d.factors()) {
      throw Error(Errc::ColumnOutOfRange,
                  "column index " + std::to_string(cols[c] + 1) + " outside 1.." +
                      std::to_string(d.factors()));
    }
    if (c > 0 && cols[c] <= cols[c - 1]) {
      throw Error(Errc::ColumnOutOfRange, "projection columns must be strictly increasing");
    }
  }
  LevelMatrix sub(d.runs(), static_cast<Eigen::Index>(cols.size()));
  std::vector<std::string> names;
  std::string label;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    sub.col(static_cast<Eigen::Index>(c)) = d.matrix().col(cols[c]);
    if (!d.column_names().empty()) {
      names.push_back(d.column_names()[cols[c]]);
      label += d.column_names()[cols[c]];
    } else {
      label += (c ? "," : "") + std::to_string(cols[c] + 1);
    }
  }
  return Design(std::move(sub), d.levels(), "{" + label + "}", std::move(names));
}

Design random_balanced(int n, int s, int q, std::uint64_t seed) {
  if (q < 2) throw Error(Errc::InvalidParameter, "level count q must be at least 2");
  if (n < 2) throw Error(Errc::TooFewRuns, "a design needs at least two runs");
  if (s < 1) throw Error(Errc::InvalidParameter, "a design needs at least one factor");
  if (n % q != 0) {
    throw Error(Errc::QNotDividingN,
                "q=" + std::to_string(q) + " does not divide n=" + std::to_string(n));
  }
  LevelMatrix levels(n, s);
  std::vector<int> column(n);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < n; ++i) column[i] = i / (n / q);
    CounterStream stream(seed, static_cast<std::uint64_t>(j));
    for (int i = n - 1; i > 0; --i) {
      const auto r = static_cast<int>(stream.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(column[i], column[r]);
    }
    for (int i = 0; i < n; ++i) levels(i, j) = column[i];
  }
  return Design(std::move(levels), q);
}

std::string_view to_string(Equidistance e) noexcept {
  switch (e) {
    case Equidistance::Equidistant: return "equidistant";
    case Equidistance::WeakEquidistant: return "weak-equidistant";
    case Equidistance::Neither: return "neither";
  }
  return "neither";
}

Equidistance equidistance_class(const Design& d) {
  const PCVector pc = pc_vector(d);
  const int spread = pc.sorted.back() - pc.sorted.front();
  if (spread == 0) return Equidistance::Equidistant;
  if (spread == 1) return Equidistance::WeakEquidistant;
  return Equidistance::Neither;
}

Design parse_design(std::string_view text, std::optional<int> q) {
  std::optional<int> directive_q;
  std::vector<std::string> names;
  std::vector<std::vector<int>> rows;
  bool seen_content = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (!seen_content && !directive_q && body.starts_with("q=")) {
        int value = 0;
        const auto digits = trim(body.substr(2));
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) {
          throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad #q directive");
        }
        directive_q = value;
      } else if (body.starts_with("columns:")) {
        names.clear();
        for (auto tok : split_ws(body.substr(8))) names.emplace_back(tok);
      }
      continue;
    }
    seen_content = true;
    std::vector<int> row;
    for (auto tok : split_ws(line)) {
      int value = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": '" +
                                          std::string(tok) + "' is not an integer");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::ParseError, "design file contains no runs");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto s = static_cast<Eigen::Index>(rows.front().size());
  LevelMatrix levels(n, s);
  int max_level = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < s; ++j) {
      levels(i, j) = rows[i][j];
      max_level = std::max(max_level, rows[i][j]);
    }
  const int levels_q = q ? *q : directive_q ? *directive_q : max_level + 1;
  return Design(std::move(levels), levels_q, {}, std::move(names));
}

Design read_design_file(const std::string& path, std::optional<int> q) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Design d = parse_design(buf.str(), q);
  d.set_label(path);
  return d;
}

std::string format_design(const Design& d) {
  std::ostringstream out;
  out << "#q=" << d.levels() << '\n';
  if (!d.column_names().empty()) {
    out << "# columns:";
    for (const auto& name : d.column_names()) out << ' ' << name;
    out << '\n';
  }
  for (int i = 0; i < d.runs(); ++i) {
    for (int j = 0; j < d.factors(); ++j) out << (j ? " " : "") << d(i, j);
    out << '\n';
  }
  return out.str();
}

void write_design_file(const std::string& path, const Design& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write '" + path + "'");
  out << format_design(d);
}

}  // namespace latmaj

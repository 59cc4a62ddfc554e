#include "latmaj/majorization.hpp"

#include <string>

#include "latmaj/error.hpp"
#include "latmaj/parallel.hpp"

namespace latmaj {

std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::EqualAsMultisets: return "equal as multisets";
    case Relation::LeftMajorizedStrict: return "left strictly majorized by right";
    case Relation::RightMajorizedStrict: return "right strictly majorized by left";
    case Relation::LeftMajorizedWeak: return "left weakly majorized by right";
    case Relation::RightMajorizedWeak: return "right weakly majorized by left";
    case Relation::Incomparable: return "incomparable";
  }
  return "incomparable";
}

std::vector<std::int64_t> prefix_sums(std::span<const int> sorted) {
  std::vector<std::int64_t> out(sorted.size());
  std::int64_t acc = 0;
  for (std::size_t r = 0; r < sorted.size(); ++r) out[r] = acc += sorted[r];
  return out;
}

MajorizationRelation compare_pc(const PCVector& x, const PCVector& y) {
  if (x.m != y.m) {
    throw Error(Errc::LengthMismatch, "PC vectors have lengths " + std::to_string(x.m) +
                                          " and " + std::to_string(y.m));
  }
  if (x.sum != y.sum) {
    throw Error(Errc::SumMismatch, "PC vectors have sums " + std::to_string(x.sum) + " and " +
                                       std::to_string(y.sum) +
                                       " (designs from different U(n,q^s) classes)");
  }
  bool left_ge = true, left_le = true;
  std::optional<std::int64_t> first_gt, first_lt;
  std::int64_t sx = 0, sy = 0;
  for (std::int64_t r = 0; r < x.m; ++r) {
    sx += x.sorted[r];
    sy += y.sorted[r];
    if (sx > sy) {
      left_le = false;
      if (!first_gt) first_gt = r + 1;
    } else if (sx < sy) {
      left_ge = false;
      if (!first_lt) first_lt = r + 1;
    }
    if (!left_ge && !left_le) return {Relation::Incomparable, std::nullopt};
  }
  if (left_ge && left_le) return {Relation::EqualAsMultisets, std::nullopt};
  if (left_ge) return {Relation::LeftMajorizedStrict, first_gt};
  return {Relation::RightMajorizedStrict, first_lt};
}

PoolClassification classify_pool(std::span<const PCVector> pool) {
  PoolClassification out;
  const std::size_t size = pool.size();
  for (const auto& pc : pool) {
    if (pc.m != pool.front().m || pc.sum != pool.front().sum) {
      throw Error(Errc::MixedParameters, "pool mixes designs from different U(n,q^s) classes");
    }
  }
  // Row a records the first b with β(b) ≺ β(a), and whether a ⪯ every b.
  std::vector<std::optional<std::size_t>> dominated_by(size);
  std::vector<char> is_majorant(size, 1);
  parallel_for(size, [&](std::size_t a) {
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b) continue;
      const MajorizationRelation rel = compare_pc(pool[a], pool[b]);
      if (rel.tag == Relation::RightMajorizedStrict && !dominated_by[a]) dominated_by[a] = b;
      if (!rel.left_weakly_majorized()) is_majorant[a] = 0;
    }
  });
  for (std::size_t a = 0; a < size; ++a) {
    if (dominated_by[a]) {
      out.inadmissible.emplace_back(a, *dominated_by[a]);
    } else {
      out.admissible.push_back(a);
    }
    if (is_majorant[a]) out.majorants.push_back(a);
  }
  if (!out.majorants.empty()) out.majorant = out.majorants.front();
  return out;
}

PoolClassification classify_pool(std::span<const Design> pool) {
  for (const auto& d : pool) {
    const auto& f = pool.front();
    if (d.runs() != f.runs() || d.factors() != f.factors() || d.levels() != f.levels()) {
      throw Error(Errc::MixedParameters, "pool mixes designs with different (n, s, q)");
    }
  }
  std::vector<PCVector> pcs(pool.size());
  parallel_for(pool.size(), [&](std::size_t i) { pcs[i] = pc_vector(pool[i]); });
  return classify_pool(std::span<const PCVector>(pcs));
}

PCBenchmark benchmark_pc(int n, int s, int q) {
  if (q < 2 || n < 2 || s < 1) {
    throw Error(Errc::InvalidParameter, "benchmark needs n >= 2, s >= 1, q >= 2");
  }
  if (n % q != 0) {
    throw Error(Errc::QNotDividingN,
                "q=" + std::to_string(q) + " does not divide n=" + std::to_string(n));
  }
  PCBenchmark b;
  b.m = static_cast<std::int64_t>(n) * (n - 1) / 2;
  b.bar = make_rational(static_cast<std::int64_t>(s) * (n - q),
                        static_cast<std::int64_t>(q) * (n - 1));
  const Rational m_bar = b.bar * b.m;
  if (denominator(m_bar) != 1) {
    throw Error(Errc::MfNotIntegral, "m times the PC mean is not an integer");
  }
  b.theta = static_cast<std::int64_t>(numerator(b.bar) / denominator(b.bar));
  b.frac = b.bar - b.theta;
  const Rational mf = b.frac * b.m;
  if (denominator(mf) != 1) throw Error(Errc::MfNotIntegral, "m*f is not an integer");
  b.count_theta_next = numerator(mf).convert_to<std::int64_t>();
  b.count_theta = b.m - b.count_theta_next;
  b.tilde.assign(static_cast<std::size_t>(b.count_theta), static_cast<int>(b.theta));
  b.tilde.insert(b.tilde.end(), static_cast<std::size_t>(b.count_theta_next),
                 static_cast<int>(b.theta + 1));
  return b;
}

}  // namespace latmaj

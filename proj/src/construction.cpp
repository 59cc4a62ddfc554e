#include "latmaj/construction.hpp"

#include <algorithm>
#include <cmath>

#include "latmaj/error.hpp"
#include "latmaj/parallel.hpp"
#include "latmaj/random.hpp"
#include "latmaj/schur.hpp"

namespace latmaj {

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

double psi_of(const Design& d, const ConvexKernel& k) { return schur_sum(pc_vector(d), k); }

}  // namespace

std::uint64_t design_hash(const Design& d) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(d.runs()) << 32 |
                          static_cast<std::uint64_t>(d.factors()));
  for (int i = 0; i < d.runs(); ++i)
    for (int j = 0; j < d.factors(); ++j) h = mix64(h ^ static_cast<std::uint64_t>(d(i, j)));
  return h;
}

std::optional<SwapProposal> robin_hood_step(const Design& d, const ConvexKernel& kernel,
                                            const TiePolicy& policy, std::uint64_t draw) {
  const ConvexKernel psi = kernel.bind(d.runs(), d.factors(), d.levels());
  const int n = d.runs(), s = d.factors();
  const CoincidenceMatrix M = coincidence_matrix(d);

  // Step 1: maximal off-diagonal entries.
  int top = -1;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) top = std::max(top, M(i, k));

  std::vector<SwapProposal> records;
  std::vector<int> rows_i, rows_t;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      if (M(i, k) != top) continue;
      // Step 2: runs with minimal coincidence from x_i.
      int low = s + 1;
      for (int t = 0; t < n; ++t)
        if (t != i && t != k) low = std::min(low, M(i, t));
      for (int t = 0; t < n; ++t) {
        if (t == i || t == k || M(i, t) != low) continue;
        std::optional<SwapProposal> local;
        for (int j = 0; j < s; ++j) {
          if (d(i, j) != d(k, j) || d(t, j) == d(i, j)) continue;
          // Step 3: rows sharing x_i's and x_t's level in column j.
          rows_i.clear();
          rows_t.clear();
          for (int w = 0; w < n; ++w) {
            if (w != i && d(w, j) == d(i, j)) rows_i.push_back(w);
            if (w != t && d(w, j) == d(t, j)) rows_t.push_back(w);
          }
          double delta = 0.0;
          for (int w : rows_i) {
            delta += psi(M(i, w) - 1) + psi(M(t, w) + 1) - psi(M(i, w)) - psi(M(t, w));
          }
          for (int w : rows_t) {
            delta += psi(M(t, w) - 1) + psi(M(i, w) + 1) - psi(M(i, w)) - psi(M(t, w));
          }
          if (!local || (delta < local->delta && !nearly_equal(delta, local->delta))) {
            SwapProposal p;
            p.i = i;
            p.t = t;
            p.j = j;
            p.k = k;
            p.delta = delta;
            for (int w : rows_i) {
              p.touched.push_back(pair_index(std::min(i, w), std::max(i, w), n));
              p.touched.push_back(pair_index(std::min(t, w), std::max(t, w), n));
            }
            for (int w : rows_t) {
              p.touched.push_back(pair_index(std::min(i, w), std::max(i, w), n));
              p.touched.push_back(pair_index(std::min(t, w), std::max(t, w), n));
            }
            std::sort(p.touched.begin(), p.touched.end());
            local = std::move(p);
          }
        }
        if (local && local->delta < 0.0) records.push_back(std::move(*local));
      }
    }
  if (records.empty()) return std::nullopt;

  // Step 4: global minimum over the record.
  double best = records.front().delta;
  for (const auto& r : records) best = std::min(best, r.delta);
  std::vector<std::size_t> tied;
  for (std::size_t r = 0; r < records.size(); ++r)
    if (nearly_equal(records[r].delta, best)) tied.push_back(r);
  std::size_t pick = tied.front();
  if (policy.kind == TiePolicy::Kind::Random && tied.size() > 1) {
    CounterStream stream(policy.seed, draw);
    pick = tied[stream.below(tied.size())];
  }
  SwapProposal out = std::move(records[pick]);
  out.design_hash = design_hash(d);
  return out;
}

Design apply_swap(const Design& d, const SwapProposal& p) {
  const int n = d.runs(), s = d.factors();
  if (p.i < 0 || p.i >= n || p.t < 0 || p.t >= n || p.i == p.t || p.j < 0 || p.j >= s ||
      (p.design_hash != 0 && p.design_hash != design_hash(d)) || d(p.i, p.j) == d(p.t, p.j)) {
    throw Error(Errc::StaleProposal, "swap proposal does not belong to this design");
  }
  LevelMatrix levels = d.matrix();
  std::swap(levels(p.i, p.j), levels(p.t, p.j));
  return Design(std::move(levels), d.levels(), d.label(), d.column_names());
}

std::string_view to_string(Termination t) noexcept {
  return t == Termination::LocalOptimum ? "local_optimum" : "iteration_cap";
}

int default_max_iters(const Design& d) { return 10 * d.runs() * d.factors(); }

DescentTrace descend(const Design& d, const ConvexKernel& kernel, std::optional<int> max_iters,
                     const TiePolicy& policy) {
  const ConvexKernel psi = kernel.bind(d.runs(), d.factors(), d.levels());
  const int cap = std::max(0, max_iters.value_or(default_max_iters(d)));
  const double start = psi_of(d, psi);
  DescentTrace trace{
      .iterations = {},
      .initial_psi = start,
      .final_psi = start,
      .bound = theorem1_bound(d.runs(), d.factors(), d.levels(), psi),
      .final_design = d,
      .terminated = Termination::LocalOptimum,
  };
  for (int iter = 0;; ++iter) {
    if (iter == cap) {
      // Only a cap if another improving move actually exists.
      if (robin_hood_step(trace.final_design, psi, policy, static_cast<std::uint64_t>(iter))) {
        trace.terminated = Termination::IterationCap;
      }
      break;
    }
    auto proposal = robin_hood_step(trace.final_design, psi, policy, static_cast<std::uint64_t>(iter));
    if (!proposal) break;
    Design next = apply_swap(trace.final_design, *proposal);
    const double value = psi_of(next, psi);
    if (!(value < trace.final_psi)) break;  // rounding left no real descent
    trace.final_design = std::move(next);
    trace.final_psi = value;
    trace.iterations.push_back({std::move(*proposal), value});
  }
  return trace;
}

namespace {

SearchResult search_from(std::vector<Design> starts, const ConvexKernel& kernel,
                         std::optional<int> max_iters, const TiePolicy& policy,
                         std::uint64_t seed) {
  std::vector<std::optional<DescentTrace>> traces(starts.size());
  parallel_for(starts.size(), [&](std::size_t r) {
    TiePolicy local = policy;
    if (local.kind == TiePolicy::Kind::Random) local.seed = derive_seed(policy.seed ^ seed, r);
    traces[r] = descend(starts[r], kernel, max_iters, local);
  });
  std::size_t best = 0;
  std::vector<double> finals;
  for (std::size_t r = 0; r < traces.size(); ++r) {
    finals.push_back(traces[r]->final_psi);
    if (traces[r]->final_psi < traces[best]->final_psi) best = r;
  }
  Design best_design = traces[best]->final_design;
  return SearchResult{std::move(best_design), std::move(*traces[best]), best, std::move(finals)};
}

}  // namespace

SearchResult restarted_search(int n, int s, int q, const ConvexKernel& kernel, int restarts,
                              std::optional<int> max_iters, std::uint64_t seed,
                              const TiePolicy& policy) {
  if (restarts < 1) throw Error(Errc::InvalidParameter, "restarted search needs at least one restart");
  std::vector<Design> starts;
  starts.reserve(restarts);
  for (int r = 0; r < restarts; ++r) {
    starts.push_back(random_balanced(n, s, q, derive_seed(seed, static_cast<std::uint64_t>(r))));
  }
  return search_from(std::move(starts), kernel, max_iters, policy, seed);
}

SearchResult improve_design(const Design& start, const ConvexKernel& kernel, int extra,
                            std::optional<int> max_iters, std::uint64_t seed,
                            const TiePolicy& policy) {
  if (extra < 0) throw Error(Errc::InvalidParameter, "restart count must be nonnegative");
  std::vector<Design> starts{start};
  for (int r = 0; r < extra; ++r) {
    starts.push_back(random_balanced(start.runs(), start.factors(), start.levels(),
                                     derive_seed(seed, static_cast<std::uint64_t>(r))));
  }
  return search_from(std::move(starts), kernel, max_iters, policy, seed);
}

}  // namespace latmaj

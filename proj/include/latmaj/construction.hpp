#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "latmaj/design.hpp"
#include "latmaj/kernel.hpp"

namespace latmaj {

/// Exchange of the levels of runs i and t in column j (0-based).
struct SwapProposal {
  int i = 0;
  int t = 0;
  int j = 0;
  /// The maximal-coincidence partner of i that selected this move.
  int k = 0;
  /// Predicted change of Σ ψ(β_r).
  double delta = 0.0;
  /// PC indices (pair order) whose coincidence changes.
  std::vector<std::int64_t> touched;
  /// Fingerprint of the design the proposal was computed for.
  std::uint64_t design_hash = 0;
};

struct TiePolicy {
  enum class Kind { Lexicographic, Random };
  Kind kind = Kind::Lexicographic;
  std::uint64_t seed = 0;

  static TiePolicy lexicographic() { return {}; }
  static TiePolicy random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

std::uint64_t design_hash(const Design& d);

/// One Robin Hood move. Candidates come from every maximal off-diagonal
/// coincidence (i,k), i<k, paired with every run t minimizing M(i,t); for each
/// column where i and k agree but t differs the exchange delta is evaluated,
/// and the global minimum over all negative records is returned. Ties go to the
/// smallest (i,k), then t, then j, unless the policy is random, in which case
/// `draw` indexes the counter stream used to pick among tied minima.
std::optional<SwapProposal> robin_hood_step(const Design& d, const ConvexKernel& k,
                                            const TiePolicy& policy = {},
                                            std::uint64_t draw = 0);

/// Exchanges entries (i,j) and (t,j). Throws StaleProposal if the design is not
/// the one the proposal was made for.
Design apply_swap(const Design& d, const SwapProposal& p);

enum class Termination { LocalOptimum, IterationCap };
std::string_view to_string(Termination t) noexcept;

struct TraceStep {
  SwapProposal swap;
  double psi = 0.0;  // Ψ after the swap
};

struct DescentTrace {
  std::vector<TraceStep> iterations;
  double initial_psi = 0.0;
  double final_psi = 0.0;
  double bound = 0.0;
  Design final_design;
  Termination terminated = Termination::LocalOptimum;
};

/// Default iteration cap 10·n·s.
int default_max_iters(const Design& d);

/// Applies Robin Hood moves until none improves or the cap is reached.
DescentTrace descend(const Design& d, const ConvexKernel& k,
                     std::optional<int> max_iters = std::nullopt,
                     const TiePolicy& policy = {});

struct SearchResult {
  Design best;
  DescentTrace trace;            // trace of the winning restart
  std::size_t best_restart = 0;  // ties go to the earliest restart
  std::vector<double> final_psi; // per restart
};

/// Restart r descends from random_balanced(n, s, q, derive_seed(seed, r)).
SearchResult restarted_search(int n, int s, int q, const ConvexKernel& k, int restarts,
                              std::optional<int> max_iters, std::uint64_t seed,
                              const TiePolicy& policy = {});

/// Like restarted_search but restart 0 starts from `start`; `extra` random
/// restarts follow with the same parameters.
SearchResult improve_design(const Design& start, const ConvexKernel& k, int extra,
                            std::optional<int> max_iters, std::uint64_t seed,
                            const TiePolicy& policy = {});

}  // namespace latmaj

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latmaj/design.hpp"

namespace latmaj {

/// One row of the cumulative sorted-PC profile: prefix length k (1-based),
/// the design's prefix sum and the benchmark's prefix sum.
struct ProfileRow {
  std::int64_t k = 0;
  std::int64_t design = 0;
  std::int64_t benchmark = 0;
};

std::vector<ProfileRow> emit_cumsum_profile(const Design& d);

namespace cli {

inline constexpr int kSuccess = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace latmaj

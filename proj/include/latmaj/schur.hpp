#pragma once

#include <optional>

#include "latmaj/design.hpp"
#include "latmaj/kernel.hpp"
#include "latmaj/majorization.hpp"

namespace latmaj {

/// Ψ(X; ψ) together with the universal lower bound for the same U(n, q^s).
struct SchurValue {
  double value = 0.0;
  ConvexKernel kernel = ConvexKernel::quadratic();
  double bound = 0.0;
  double gap = 0.0;
};

/// Σ ψ(β_r), accumulated over the histogram of PC values in increasing order
/// so the result does not depend on pair order.
double schur_sum(const PCVector& pc, const ConvexKernel& k);
std::optional<Rational> schur_sum_exact(const PCVector& pc, const ConvexKernel& k);

/// Unbound kernels (variance) are bound to the design's (n, s, q) first.
SchurValue schur_psi(const Design& d, const ConvexKernel& k);

/// m(1-f)ψ(θ) + mfψ(θ+1).
double theorem1_bound(int n, int s, int q, const ConvexKernel& k);
std::optional<Rational> theorem1_bound_exact(int n, int s, int q, const ConvexKernel& k);

}  // namespace latmaj

#include "latmaj/schur.hpp"

namespace latmaj {

double schur_sum(const PCVector& pc, const ConvexKernel& k) {
  const auto counts = pc.histogram();
  double total = 0.0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (counts[v]) total += static_cast<double>(counts[v]) * k(static_cast<double>(v));
  }
  return total;
}

std::optional<Rational> schur_sum_exact(const PCVector& pc, const ConvexKernel& k) {
  const auto counts = pc.histogram();
  Rational total = 0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (!counts[v]) continue;
    const auto value = k.exact(static_cast<std::int64_t>(v));
    if (!value) return std::nullopt;
    total += *value * counts[v];
  }
  return total;
}

SchurValue schur_psi(const Design& d, const ConvexKernel& k) {
  const ConvexKernel bound_kernel = k.bind(d.runs(), d.factors(), d.levels());
  SchurValue out;
  out.kernel = bound_kernel;
  out.value = schur_sum(pc_vector(d), bound_kernel);
  out.bound = theorem1_bound(d.runs(), d.factors(), d.levels(), bound_kernel);
  out.gap = out.value - out.bound;
  return out;
}

double theorem1_bound(int n, int s, int q, const ConvexKernel& k) {
  const PCBenchmark b = benchmark_pc(n, s, q);
  const ConvexKernel kb = k.bind(n, s, q);
  const auto theta = static_cast<double>(b.theta);
  double bound = 0.0;
  if (b.count_theta) bound += static_cast<double>(b.count_theta) * kb(theta);
  if (b.count_theta_next) bound += static_cast<double>(b.count_theta_next) * kb(theta + 1.0);
  return bound;
}

std::optional<Rational> theorem1_bound_exact(int n, int s, int q, const ConvexKernel& k) {
  const PCBenchmark b = benchmark_pc(n, s, q);
  const ConvexKernel kb = k.bind(n, s, q);
  const auto lo = kb.exact(b.theta);
  const auto hi = kb.exact(b.theta + 1);
  if (!lo || !hi) return std::nullopt;
  return *lo * b.count_theta + *hi * b.count_theta_next;
}

}  // namespace latmaj

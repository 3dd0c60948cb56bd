#include <cmath>

#include "twocontact/simulator.hpp"

namespace twocontact {

// Impacts alternate between the two contacts (or between a flight phase
// and a rocking phase), so ratios are taken over two impacts.
std::optional<ZenoPoint> detect_zeno(std::span<const ImpactRecord> recent,
                                     const ZenoParams& params) {
  const std::size_t n = recent.size();
  if (n < 4 || n < static_cast<std::size_t>(params.window)) return std::nullopt;
  const std::size_t first = n - params.window;
  for (std::size_t k = first + 2; k < n; ++k) {
    const double prev = recent[k - 2].speed;
    if (!(prev > 0)) return std::nullopt;
    const double r = recent[k].speed / prev;
    if (!(r > 0 && r < 1)) return std::nullopt;
  }
  const double r1 = recent[n - 1].speed / recent[n - 3].speed;
  const double r2 = recent[n - 2].speed / recent[n - 4].speed;
  const double rho = std::sqrt(r1 * r2);
  if (recent[n - 2].speed * rho >= params.v_zeno) return std::nullopt;

  const double tau_last = recent[n - 1].t - recent[n - 2].t;
  const double tau_prev = recent[n - 2].t - recent[n - 3].t;
  const double tail = rho / (1 - rho);
  ZenoPoint z;
  z.ratio = rho;
  z.t = recent[n - 1].t + (tau_last + tau_prev) * tail;
  z.x2 = recent[n - 1].x2 + (recent[n - 1].x2 - recent[n - 3].x2) * tail;
  z.dx2 = recent[n - 1].dx2 + (recent[n - 1].dx2 - recent[n - 3].dx2) * tail;
  return z;
}

}  // namespace twocontact

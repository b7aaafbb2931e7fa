#pragma once

#include <array>
#include <cstddef>

#include "probwave/errors.hpp"

namespace probwave::diff {

/// Central-difference derivative of order 1 or 2 with `levels` rounds of
/// Richardson extrapolation over halved steps. `step` may be complex, in
/// which case f must be holomorphic along that direction.
///
/// levels = 0 gives the plain O(h^2) central difference.
template <class F, class Arg, class Step>
auto central(F&& f, Arg at, Step step, int order, int levels = 3) {
  using R = decltype(f(at));
  if (order != 1 && order != 2) throw InvalidInput("derivative order must be 1 or 2");
  if (levels < 0 || levels > 7) throw InvalidInput("richardson levels must be in [0, 7]");

  auto estimate = [&](Step h) -> R {
    if (order == 1) return (f(at + h) - f(at - h)) / (2.0 * h);
    return (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h);
  };

  std::array<R, 8> prev{};
  std::array<R, 8> cur{};
  Step h = step;
  prev[0] = estimate(h);
  for (int i = 1; i <= levels; ++i) {
    h = h / 2.0;
    cur[0] = estimate(h);
    double factor = 4.0;
    for (int j = 1; j <= i; ++j) {
      cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (factor - 1.0);
      factor *= 4.0;
    }
    prev = cur;
  }
  return prev[static_cast<std::size_t>(levels)];
}

}  // namespace probwave::diff

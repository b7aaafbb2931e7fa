#include "probwave/format.hpp"

#include <cmath>
#include <cstdio>

namespace probwave {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  const double a = std::abs(x);
  char buf[64];
  if (a == 0.0 || (a >= 1e-4 && a < 1e15)) {
    std::snprintf(buf, sizeof buf, "%.12f", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.12e", x);
  }
  return buf;
}

}  // namespace probwave

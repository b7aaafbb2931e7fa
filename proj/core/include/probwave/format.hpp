#pragma once

#include <string>

namespace probwave {

/// Decimal text for CSV output: fixed notation with 12 decimals when
/// 1e-4 <= |x| < 1e15 (and for zero), otherwise scientific with 12
/// decimals. Non-finite values print as nan, inf or -inf.
std::string format_number(double x);

}  // namespace probwave

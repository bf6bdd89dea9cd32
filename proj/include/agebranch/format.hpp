#pragma once

#include <string>

namespace agebranch {

// Decimal with 17 significant digits (round-trips a double).
std::string fmt17(double x);

}  // namespace agebranch

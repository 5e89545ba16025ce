#pragma once

#include <string>

namespace afmass {

/// Shortest round-trip decimal form of a double, independent of the locale.
std::string fmt_num(double value);

}  // namespace afmass

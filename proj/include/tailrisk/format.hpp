#pragma once

#include <string>

namespace tailrisk {

// Shortest round-trip decimal representation; locale independent.
std::string format_double(double v);

}  // namespace tailrisk

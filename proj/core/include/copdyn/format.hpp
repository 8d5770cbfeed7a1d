#pragma once

#include <string>

namespace copdyn {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace copdyn

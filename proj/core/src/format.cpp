#include "copdyn/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace copdyn {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf.data(), end);
}

}  // namespace copdyn

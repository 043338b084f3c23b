#pragma once

#include <array>

namespace amcf {

/// A location in the base space R^N, N <= 2. Unused trailing entries are 0.
using Point = std::array<double, 2>;

}  // namespace amcf

#pragma once

#include <cstddef>
#include <vector>

namespace sparsetree {

// Dense point in R^N. Coordinates are indexed from 0 throughout the library.
using Vector = std::vector<double>;
using Coord = std::size_t;

// Magnitudes at or below this count as zero for sign censuses and ||x||_0.
inline constexpr double kZeroTol = 1e-9;
// Two vertices closer than this in the max-norm are duplicates.
inline constexpr double kDupTol = 1e-9;

enum class Sign { kPositive, kNegative };

}  // namespace sparsetree

#pragma once

#include <cstddef>
#include <vector>

namespace fcpd {

// Rectangular sampling grid of a compact domain in R^d. Integrals are
// approximated by Riemann sums with the uniform cell weight
// w = prod(spacing), so the grid enters every statistic only through
// total_points() and weight().
struct Grid {
  std::size_t dim = 1;
  std::vector<std::size_t> points_per_axis;
  std::vector<double> spacing;

  // Uniform grid of s points on [0,1]^d (spacing 1/s per axis), the
  // default when a file carries no grid metadata.
  static Grid uniform01(std::size_t points, std::size_t dim = 1);

  std::size_t total_points() const;
  double weight() const;

  // Throws ConfigError unless dim >= 1, axes match dim, spacings are
  // strictly positive and total_points() >= 2.
  void validate() const;

  bool operator==(const Grid& other) const = default;
};

}  // namespace fcpd

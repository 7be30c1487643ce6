#include "fcpd/grid.hpp"

#include "fcpd/errors.hpp"

namespace fcpd {

Grid Grid::uniform01(std::size_t points, std::size_t dim) {
  Grid g;
  g.dim = dim;
  g.points_per_axis.assign(dim, points);
  g.spacing.assign(dim, 1.0 / static_cast<double>(points));
  return g;
}

std::size_t Grid::total_points() const {
  std::size_t total = 1;
  for (std::size_t p : points_per_axis) total *= p;
  return total;
}

double Grid::weight() const {
  double w = 1.0;
  for (double s : spacing) w *= s;
  return w;
}

void Grid::validate() const {
  if (dim < 1) throw ConfigError("grid dimension must be positive");
  if (points_per_axis.size() != dim || spacing.size() != dim)
    throw ConfigError("grid axis lists must match the dimension");
  for (std::size_t p : points_per_axis)
    if (p < 1) throw ConfigError("points per axis must be positive");
  for (double s : spacing)
    if (!(s > 0.0)) throw ConfigError("grid spacing must be positive");
  if (total_points() < 2) throw ConfigError("grid needs at least 2 points");
}

}  // namespace fcpd

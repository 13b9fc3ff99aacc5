#pragma once

#include <array>
#include <vector>

namespace rendnet::lsr {

using Triangle = std::array<int, 3>;

// Delaunay triangulation of the convex hull by Bowyer-Watson insertion.
// Cocircular ties resolve to the diagonal incident to the lowest point index.
// Throws DomainError for fewer than 3 points or an all-collinear set.
std::vector<Triangle> delaunay_2d(const std::vector<std::array<double, 2>>& points);

} // namespace rendnet::lsr

#pragma once

#include <cstdint>
#include <vector>

#include "mgr/geometry.hpp"

namespace mgr {

/// Partition of a point set into Rips-Vietoris connected components:
/// two points share a label iff they are linked by a chain of hops of
/// Euclidean length <= delta. Labels are dense in 0..count-1, ordered by
/// smallest member index.
struct ComponentLabeling {
    std::vector<std::int32_t> labels;
    int count = 0;
};

/// Components of the Rips graph at scale delta over the whole cloud.
ComponentLabeling rips_components(const PointCloud& cloud, double delta);

/// Components over a subset view; labels follow subset order.
ComponentLabeling rips_components(const PointCloud& cloud,
                                  std::span<const std::uint32_t> subset,
                                  double delta);

int count_components(const PointCloud& cloud, double delta);
int count_components(const PointCloud& cloud,
                     std::span<const std::uint32_t> subset, double delta);

}  // namespace mgr

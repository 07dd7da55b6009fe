#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "subgeo/linalg.hpp"

namespace subgeo {

/// Axis-aligned closed box; bounds may be infinite for chart domains.
struct Box {
    std::vector<std::pair<double, double>> intervals;

    int dim() const { return static_cast<int>(intervals.size()); }
    bool empty() const;
    bool contains(const Point& p) const;
    bool strictly_contains(const Point& p) const;
    Point center() const;
    /// Cartesian product of this box with `other`.
    Box operator*(const Box& other) const;

    static Box cube(int dim, double lo, double hi);
};

struct SampleSet {
    std::uint64_t seed = 0;
    Box box;
    int count = 0;
    std::vector<Point> points;
};

/// Deterministic interior samples: identical (box, count, seed) give
/// bit-identical points on every platform.
SampleSet sample(const Box& box, int count, std::uint64_t seed);

}  // namespace subgeo

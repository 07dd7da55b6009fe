#include "subgeo/sampling.hpp"

#include <cmath>
#include <random>

namespace subgeo {

bool Box::empty() const {
    if (intervals.empty()) return true;
    for (const auto& [lo, hi] : intervals)
        if (!(lo < hi)) return true;
    return false;
}

bool Box::contains(const Point& p) const {
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (!(p[i] >= intervals[static_cast<std::size_t>(i)].first && p[i] <= intervals[static_cast<std::size_t>(i)].second))
            return false;
    return true;
}

bool Box::strictly_contains(const Point& p) const {
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (!(p[i] > intervals[static_cast<std::size_t>(i)].first && p[i] < intervals[static_cast<std::size_t>(i)].second))
            return false;
    return true;
}

Point Box::center() const {
    Point c(dim());
    for (int i = 0; i < dim(); ++i) {
        const auto [lo, hi] = intervals[static_cast<std::size_t>(i)];
        if (std::isfinite(lo) && std::isfinite(hi)) c[i] = 0.5 * (lo + hi);
        else if (std::isfinite(lo)) c[i] = lo + 1.0;
        else if (std::isfinite(hi)) c[i] = hi - 1.0;
        else c[i] = 0.0;
    }
    return c;
}

Box Box::operator*(const Box& other) const {
    Box out = *this;
    out.intervals.insert(out.intervals.end(), other.intervals.begin(), other.intervals.end());
    return out;
}

Box Box::cube(int dim, double lo, double hi) {
    return Box{std::vector<std::pair<double, double>>(static_cast<std::size_t>(dim), {lo, hi})};
}

SampleSet sample(const Box& box, int count, std::uint64_t seed) {
    if (box.empty()) throw ContractViolation("cannot sample an empty box");
    if (count < 1) throw ContractViolation("sample count must be positive");
    for (const auto& [lo, hi] : box.intervals)
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw ContractViolation("cannot sample an unbounded box");

    // mt19937_64 output is fully specified by the standard; the mapping to
    // [0, 1) is done by hand because the distributions are not.
    std::mt19937_64 rng(seed);
    SampleSet out{seed, box, count, {}};
    out.points.reserve(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) {
        Point p(box.dim());
        for (int i = 0; i < box.dim(); ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const auto [lo, hi] = box.intervals[static_cast<std::size_t>(i)];
            p[i] = lo + (hi - lo) * (0.02 + 0.96 * u);
        }
        out.points.push_back(std::move(p));
    }
    return out;
}

}  // namespace subgeo

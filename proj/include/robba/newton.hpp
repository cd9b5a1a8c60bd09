#pragma once

#include <optional>
#include <vector>

#include "robba/witt.hpp"

namespace robba {

/// Slope window for Newton polygons: (0, hi] when lo is absent (hi may be
/// infinite), or the closed interval [lo, hi].
struct Window {
    std::optional<Rat> lo;
    ExtRat hi;

    static Window upto(const ExtRat& r) { return Window{std::nullopt, r}; }
    static Window closed(const Interval& I) { return Window{I.s, ExtRat(I.r)}; }
    bool contains(const Rat& t) const {
        if (lo) {
            if (t < *lo) return false;
        } else if (!(Rat(0) < t)) {
            return false;
        }
        return ExtRat(t) <= hi;
    }
};

/// Newton polygon restricted to a window: segments (slope, multiplicity)
/// with slopes strictly increasing. Empty when no slope falls in the window.
struct NewtonPolygon {
    struct Segment {
        Rat slope;
        long long multiplicity;
    };
    std::vector<Segment> segments;
    Window window;

    long long total_multiplicity() const {
        long long s = 0;
        for (const auto& seg : segments) s += seg.multiplicity;
        return s;
    }
};

/// Lower hull of the points (n, v(x_n)): the slopes where the minimizer of
/// n + t*v(x_n) jumps, with multiplicity the size of the index jump.
/// Throws ZeroInput on the exact zero and PrecisionExhausted when hidden
/// terms could alter the hull inside the window.
NewtonPolygon polygon(const WittSeries& x, const Window& window);

/// Multiplicity of slope t (0 when the polygon has no such segment).
long long multiplicity(const WittSeries& x, const Rat& t, const Window& window);

/// Largest index attaining min_n(n + r*v(x_n)); nullopt encodes deg(0) = -inf.
std::optional<long long> degree(const WittSeries& x, const Rat& r);

/// Degree over a closed interval: the total multiplicity of slopes in I
/// (the Euclidean-size analogue for B^I; units are exactly degree 0).
long long degree_over(const WittSeries& x, const Interval& I);

/// Vertices (n, v) of the lower hull, n ascending (for rendering).
std::vector<WittSeries::NormPoint> hull_vertices(const WittSeries& x);

} // namespace robba

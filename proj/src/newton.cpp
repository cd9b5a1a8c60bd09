#include "robba/newton.hpp"

#include <algorithm>

namespace robba {

namespace {

using NormPoint = WittSeries::NormPoint;

// Tie radius between two points with n_a < n_b, v_a > v_b: the t at which
// n + t*v agree. Positive by construction.
Rat tie_slope(const NormPoint& a, const NormPoint& b) {
    return Rat(b.n - a.n) / (a.v - b.v);
}

// Vertices of the lower-left hull (the minimizers of n + t*v as t sweeps
// (0, inf)), n ascending, v strictly descending, tie slopes increasing.
std::vector<NormPoint> lower_hull(std::vector<NormPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const NormPoint& a, const NormPoint& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.v < b.v;
    });
    std::vector<NormPoint> hull;
    for (const auto& p : pts) {
        if (!hull.empty() && p.v >= hull.back().v) continue; // dominated for t > 0
        while (hull.size() >= 2 &&
               tie_slope(hull[hull.size() - 2], hull.back()) >= tie_slope(hull.back(), p))
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

ExtRat eval_hull(const std::vector<NormPoint>& pts, const Rat& t) {
    ExtRat e = ExtRat::infinity();
    for (const auto& p : pts) e = min(e, ExtRat(Rat(p.n) + t * p.v));
    return e;
}

// Checks that hidden terms can never reach the definite profile inside the
// window: e(t) < P(t) for all window t, with an asymptotic check when the
// window is unbounded. Both profiles are min-of-affine, so it suffices to
// compare at the union of their hull breakpoints and the window endpoints.
bool hull_safe(const std::vector<NormPoint>& definite, const std::vector<NormPoint>& hidden,
               const Window& window) {
    if (hidden.empty()) return true;
    std::vector<NormPoint> dh = lower_hull(definite);
    std::vector<NormPoint> hh = lower_hull(hidden);

    std::vector<Rat> samples;
    samples.push_back(window.lo ? *window.lo : Rat(0));
    if (window.hi.is_finite()) samples.push_back(window.hi.finite());
    auto add_ties = [&](const std::vector<NormPoint>& h) {
        for (size_t i = 0; i + 1 < h.size(); ++i) {
            Rat t = tie_slope(h[i], h[i + 1]);
            if (window.contains(t)) samples.push_back(t);
        }
    };
    add_ties(dh);
    add_ties(hh);
    for (const Rat& t : samples)
        if (eval_hull(dh, t) >= eval_hull(hh, t)) return false;
    if (window.hi.is_infinite()) {
        // Compare asymptotics: the eventual direction is the (v, n)-lexicographic
        // minimum among each profile's points.
        auto direction = [](const std::vector<NormPoint>& h) { return h.back(); };
        NormPoint de = direction(dh), he = direction(hh);
        if (de.v > he.v || (de.v == he.v && de.n >= he.n)) return false;
    }
    return true;
}

void require_nonzero(const WittSeries& x) {
    if (x.is_zero()) fail(ErrorCode::ZeroInput, "Newton polygon of zero");
    if (x.no_terms())
        fail(ErrorCode::PrecisionExhausted, "element is zero within precision");
}

} // namespace

NewtonPolygon polygon(const WittSeries& x, const Window& window) {
    require_nonzero(x);
    std::vector<NormPoint> pts = x.norm_points();
    if (!hull_safe(pts, x.hidden_bounds(), window))
        fail(ErrorCode::PrecisionExhausted, "hull vertices not provably inside precision");
    std::vector<NormPoint> hull = lower_hull(pts);
    NewtonPolygon np;
    np.window = window;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        Rat t = tie_slope(hull[i], hull[i + 1]);
        if (window.contains(t)) np.segments.push_back({t, hull[i + 1].n - hull[i].n});
    }
    return np;
}

long long multiplicity(const WittSeries& x, const Rat& t, const Window& window) {
    NewtonPolygon np = polygon(x, window);
    for (const auto& seg : np.segments)
        if (seg.slope == t) return seg.multiplicity;
    return 0;
}

std::optional<long long> degree(const WittSeries& x, const Rat& r) {
    if (x.is_zero()) return std::nullopt; // deg(0) = -inf
    if (x.no_terms())
        fail(ErrorCode::PrecisionExhausted, "element is zero within precision");
    ExtRat e = ExtRat::infinity();
    for (const auto& p : x.norm_points()) e = min(e, ExtRat(Rat(p.n) + r * p.v));
    long long arg = 0;
    bool found = false;
    for (const auto& p : x.norm_points())
        if (ExtRat(Rat(p.n) + r * p.v) == e && (!found || p.n > arg)) {
            arg = p.n;
            found = true;
        }
    // A hidden term reaching e could tie at a larger index and change the
    // answer, so strict separation is required.
    ExtRat hidden = eval_hull(x.hidden_bounds(), r);
    if (hidden <= e)
        fail(ErrorCode::PrecisionExhausted, "degree not provable at this precision");
    return arg;
}

long long degree_over(const WittSeries& x, const Interval& I) {
    return polygon(x, Window::closed(I)).total_multiplicity();
}

std::vector<WittSeries::NormPoint> hull_vertices(const WittSeries& x) {
    require_nonzero(x);
    return lower_hull(x.norm_points());
}

} // namespace robba

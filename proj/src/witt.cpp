#include "robba/witt.hpp"

#include <algorithm>

namespace robba {

WittSeries WittSeries::zero(FieldPtr field) {
    WittSeries w;
    w.field_ = std::move(field);
    return w;
}

WittSeries WittSeries::from_coeffs(FieldPtr field, std::map<long long, HahnSeries> coeffs,
                                   std::optional<Tail> tail) {
    WittSeries w;
    w.field_ = std::move(field);
    w.coeffs_ = std::move(coeffs);
    w.tail_ = tail;
    w.normalize();
    return w;
}

WittSeries WittSeries::teichmuller(const HahnSeries& x) {
    WittSeries w;
    w.field_ = x.field();
    w.coeffs_.emplace(0, x);
    w.normalize();
    return w;
}

WittSeries WittSeries::pi_power(FieldPtr field, long long n) {
    WittSeries w;
    w.field_ = field;
    w.coeffs_.emplace(n, HahnSeries::constant(field, 1));
    return w;
}

WittSeries WittSeries::one(FieldPtr field) { return pi_power(std::move(field), 0); }

void WittSeries::normalize() {
    if (!field_) fail(ErrorCode::InvalidArgument, "Witt series without field context");
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second.is_zero()) {
            it = coeffs_.erase(it);
            continue;
        }
        require_same_field(*field_, *it->second.field());
        // Stored terms at or beyond the tail are not actually known; fold their
        // valuation bound into the tail and drop them.
        if (tail_ && it->first >= tail_->n) {
            Valuation v = it->second.valuation();
            if (v.bound.is_finite()) tail_->v = std::min(tail_->v, v.bound.finite());
            it = coeffs_.erase(it);
            continue;
        }
        ++it;
    }
}

bool WittSeries::is_exact() const {
    if (tail_) return false;
    for (const auto& [n, c] : coeffs_)
        if (!c.is_exact()) return false;
    return true;
}

long long WittSeries::n_min() const {
    if (coeffs_.empty()) fail(ErrorCode::ZeroInput, "n_min of a series with no stored terms");
    return coeffs_.begin()->first;
}

bool WittSeries::integral_role() const {
    if (!coeffs_.empty() && coeffs_.begin()->first < 0) return false;
    if (tail_ && tail_->n < 0) return false;
    return true;
}

ExtRat WittSeries::pi_prec() const {
    return tail_ ? ExtRat(Rat(tail_->n)) : ExtRat::infinity();
}

const HahnSeries* WittSeries::coeff_at(long long n) const {
    auto it = coeffs_.find(n);
    return it == coeffs_.end() ? nullptr : &it->second;
}

WittSeries operator+(const WittSeries& a, const WittSeries& b) {
    require_same_field(*a.field_, *b.field_);
    std::map<long long, HahnSeries> coeffs = a.coeffs_;
    for (const auto& [n, c] : b.coeffs_) {
        auto it = coeffs.find(n);
        if (it == coeffs.end())
            coeffs.emplace(n, c);
        else
            it->second = it->second + c;
    }
    std::optional<WittSeries::Tail> tail;
    if (a.tail_ && b.tail_)
        tail = WittSeries::Tail{std::min(a.tail_->n, b.tail_->n), std::min(a.tail_->v, b.tail_->v)};
    else if (a.tail_)
        tail = a.tail_;
    else if (b.tail_)
        tail = b.tail_;
    return WittSeries::from_coeffs(a.field_, std::move(coeffs), tail);
}

WittSeries WittSeries::operator-() const {
    WittSeries w = *this;
    for (auto& [n, c] : w.coeffs_) c = -c;
    return w;
}

WittSeries operator-(const WittSeries& a, const WittSeries& b) { return a + (-b); }

namespace {

// Lower bound over the stored coefficients' valuations, and least index;
// used to bound hidden x tail times stored y products.
struct StoredProfile {
    bool empty;
    long long n_min;
    Rat v_min;
};

StoredProfile stored_profile(const WittSeries& x) {
    StoredProfile p{true, 0, Rat(0)};
    for (const auto& [n, c] : x.coeffs()) {
        Valuation v = c.valuation();
        // Coefficients are never exact zero, so the bound is finite.
        Rat vb = v.bound.finite();
        if (p.empty) {
            p = {false, n, vb};
        } else {
            p.n_min = std::min(p.n_min, n);
            p.v_min = std::min(p.v_min, vb);
        }
    }
    return p;
}

void merge_tail(std::optional<WittSeries::Tail>& acc, long long n, const Rat& v) {
    if (!acc)
        acc = WittSeries::Tail{n, v};
    else
        acc = WittSeries::Tail{std::min(acc->n, n), std::min(acc->v, v)};
}

} // namespace

WittSeries operator*(const WittSeries& a, const WittSeries& b) {
    require_same_field(*a.field_, *b.field_);
    if (a.is_zero() || b.is_zero()) return WittSeries::zero(a.field_);

    std::map<long long, HahnSeries> coeffs;
    for (const auto& [i, ca] : a.coeffs_)
        for (const auto& [j, cb] : b.coeffs_) {
            HahnSeries prod = ca * cb;
            auto it = coeffs.find(i + j);
            if (it == coeffs.end())
                coeffs.emplace(i + j, std::move(prod));
            else
                it->second = it->second + prod;
        }

    std::optional<WittSeries::Tail> tail;
    StoredProfile pa = stored_profile(a), pb = stored_profile(b);
    if (a.tail_) {
        if (!pb.empty) merge_tail(tail, a.tail_->n + pb.n_min, a.tail_->v + pb.v_min);
        if (b.tail_) merge_tail(tail, a.tail_->n + b.tail_->n, a.tail_->v + b.tail_->v);
    }
    if (b.tail_ && !pa.empty) merge_tail(tail, b.tail_->n + pa.n_min, b.tail_->v + pa.v_min);
    return WittSeries::from_coeffs(a.field_, std::move(coeffs), tail);
}

WittSeries WittSeries::shift(long long k) const {
    WittSeries w;
    w.field_ = field_;
    for (const auto& [n, c] : coeffs_) w.coeffs_.emplace(n + k, c);
    if (tail_) w.tail_ = Tail{tail_->n + k, tail_->v};
    return w;
}

WittSeries WittSeries::scale(const HahnSeries& h) const {
    WittSeries w;
    w.field_ = field_;
    if (h.is_zero()) return w;
    for (const auto& [n, c] : coeffs_) w.coeffs_.emplace(n, c * h);
    if (tail_) {
        Valuation v = h.valuation();
        w.tail_ = Tail{tail_->n, tail_->v + v.bound.finite()};
    }
    w.normalize();
    return w;
}

bool operator==(const WittSeries& a, const WittSeries& b) {
    if (!a.field_ || !b.field_) return !a.field_ && !b.field_;
    if (!a.field_->same(*b.field_)) return false;
    if (a.tail_.has_value() != b.tail_.has_value()) return false;
    if (a.tail_ && (a.tail_->n != b.tail_->n || !(a.tail_->v == b.tail_->v))) return false;
    return a.coeffs_ == b.coeffs_;
}

std::vector<WittSeries::NormPoint> WittSeries::norm_points() const {
    std::vector<NormPoint> pts;
    for (const auto& [n, c] : coeffs_) {
        if (c.no_terms()) continue;
        pts.push_back({n, c.valuation().bound.finite()});
    }
    return pts;
}

std::vector<WittSeries::NormPoint> WittSeries::hidden_bounds() const {
    std::vector<NormPoint> pts;
    for (const auto& [n, c] : coeffs_) {
        if (!c.no_terms()) continue;
        pts.push_back({n, c.prec().finite()});
    }
    if (tail_) pts.push_back({tail_->n, tail_->v});
    return pts;
}

namespace {

ExtRat eval_min(const std::vector<WittSeries::NormPoint>& pts, const Rat& t) {
    ExtRat e = ExtRat::infinity();
    for (const auto& p : pts) e = min(e, ExtRat(Rat(p.n) + t * p.v));
    return e;
}

} // namespace

NormExponent WittSeries::gauss_norm(const Rat& t) const {
    if (t.sign() < 0) fail(ErrorCode::InvalidArgument, "Gauss norm radius must be >= 0");
    ExtRat value = eval_min(norm_points(), t);
    ExtRat potential = eval_min(hidden_bounds(), t);
    return {value, min(value, potential)};
}

NormExponent WittSeries::interval_norm(const Interval& I) const {
    NormExponent es = gauss_norm(I.s), er = gauss_norm(I.r);
    return {min(es.value, er.value), min(es.lower_bound, er.lower_bound)};
}

WittSeries WittSeries::clipped(const Interval& I, const ExtRat& floor, bool* dropped) const {
    if (dropped) *dropped = false;
    if (floor.is_infinite()) return *this;
    const Rat& f = floor.finite();
    bool any = false;
    WittSeries w;
    w.field_ = field_;
    w.tail_ = tail_;
    for (const auto& [n, c] : coeffs_) {
        // Keep a Hahn term at exponent e iff min over endpoints of n + t*e
        // stays below the floor; that keep-set is a prefix e < cap. Precision
        // is untouched: the dropped part is the caller's residual.
        Rat gap = f - Rat(n);
        Rat cap = std::max(gap / I.s, gap / I.r);
        HahnSeries t = c.drop_from(cap, &any);
        if (!t.is_zero()) w.coeffs_.emplace(n, t);
    }
    if (dropped) *dropped = any;
    w.normalize();
    return w;
}

std::string WittSeries::str() const {
    std::string s;
    for (const auto& [n, c] : coeffs_) {
        if (!s.empty()) s += " + ";
        std::string coeff;
        bool is_one = c.terms().size() == 1 && c.terms()[0].coef == 1 &&
                      c.terms()[0].exp.is_zero() && c.is_exact();
        if (!is_one || n == 0) coeff = "[" + c.str() + "]";
        if (n == 0) {
            s += coeff;
        } else {
            std::string pi = "pi";
            if (n != 1) pi += "^" + std::to_string(n);
            s += coeff.empty() ? pi : pi + "*" + coeff;
        }
    }
    if (tail_) {
        std::string cap = "O(pi^" + std::to_string(tail_->n) + ")";
        s = s.empty() ? cap : s + " + " + cap;
    }
    return s.empty() ? "0" : s;
}

WittSeries restrict_interval(const WittSeries& x, const Interval& I, const Interval& inner) {
    if (!I.contains(inner)) fail(ErrorCode::BadInterval, "inner interval not contained in outer");
    return x;
}

} // namespace robba

#include "robba/hahn.hpp"

#include <algorithm>
#include <map>

namespace robba {

HahnSeries HahnSeries::zero(FieldPtr field) {
    HahnSeries h;
    h.field_ = std::move(field);
    return h;
}

HahnSeries HahnSeries::zero_mod(FieldPtr field, const Rat& prec) {
    HahnSeries h;
    h.field_ = std::move(field);
    h.prec_ = ExtRat(prec);
    return h;
}

HahnSeries HahnSeries::constant(FieldPtr field, uint16_t c) {
    return monomial(std::move(field), c, Rat(0));
}

HahnSeries HahnSeries::monomial(FieldPtr field, uint16_t c, const Rat& exp) {
    HahnSeries h;
    h.field_ = std::move(field);
    if (c != 0) h.terms_.push_back({exp, c});
    h.normalize();
    return h;
}

HahnSeries HahnSeries::make(FieldPtr field, std::vector<Term> terms, ExtRat prec) {
    HahnSeries h;
    h.field_ = std::move(field);
    h.terms_ = std::move(terms);
    h.prec_ = prec;
    h.normalize();
    return h;
}

void HahnSeries::normalize() {
    if (!field_) fail(ErrorCode::InvalidArgument, "Hahn series without field context");
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.exp < b.exp; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!out.empty() && out.back().exp == t.exp) {
            out.back().coef = field_->add(out.back().coef, t.coef);
            if (out.back().coef == 0) out.pop_back();
        } else if (t.coef != 0) {
            out.push_back(t);
        }
    }
    terms_.clear();
    for (auto& t : out) {
        if (ExtRat(t.exp) >= prec_) continue;
        field_->check_exponent(t.exp);
        terms_.push_back(t);
    }
}

Valuation HahnSeries::valuation() const {
    if (!terms_.empty()) return {ExtRat(terms_.front().exp), true};
    if (prec_.is_infinite()) return {ExtRat::infinity(), true};
    return {prec_, false};
}

uint16_t HahnSeries::coeff_at(const Rat& exp) const {
    for (const auto& t : terms_)
        if (t.exp == exp) return t.coef;
    return 0;
}

HahnSeries operator+(const HahnSeries& a, const HahnSeries& b) {
    require_same_field(*a.field_, *b.field_);
    std::vector<HahnSeries::Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return HahnSeries::make(a.field_, std::move(terms), min(a.prec_, b.prec_));
}

HahnSeries HahnSeries::operator-() const {
    HahnSeries h = *this;
    for (auto& t : h.terms_) t.coef = field_->neg(t.coef);
    return h;
}

HahnSeries operator-(const HahnSeries& a, const HahnSeries& b) { return a + (-b); }

HahnSeries operator*(const HahnSeries& a, const HahnSeries& b) {
    require_same_field(*a.field_, *b.field_);
    // prec(ab) = min(v(a) + prec(b), v(b) + prec(a)); with empty operands the
    // valuation lower bound takes over, and exact zero times anything is zero.
    ExtRat prec = ExtRat::infinity();
    Valuation va = a.valuation(), vb = b.valuation();
    if (!(va.bound.is_infinite() && va.exact))
        prec = min(prec, va.bound + b.prec_);
    else
        return HahnSeries::zero(a.field_); // a is exactly zero
    if (!(vb.bound.is_infinite() && vb.exact))
        prec = min(prec, vb.bound + a.prec_);
    else
        return HahnSeries::zero(a.field_);

    std::vector<HahnSeries::Term> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_)
            terms.push_back({ta.exp + tb.exp, a.field_->mul(ta.coef, tb.coef)});
    return HahnSeries::make(a.field_, std::move(terms), prec);
}

HahnSeries HahnSeries::scale(uint16_t c) const {
    if (c == 0) return zero(field_);
    HahnSeries h = *this;
    for (auto& t : h.terms_) t.coef = field_->mul(t.coef, c);
    return h;
}

HahnSeries HahnSeries::inverse(const Rat& target) const {
    if (terms_.empty()) {
        if (prec_.is_infinite()) fail(ErrorCode::ZeroInput, "inverse of zero");
        fail(ErrorCode::PrecisionExhausted, "inverse of a possibly-zero series");
    }
    const Rat m = terms_.front().exp;
    // Exact monomial: exact inverse.
    if (terms_.size() == 1 && prec_.is_infinite()) {
        Rat e = -m;
        field_->check_exponent(e);
        return monomial(field_, field_->inv(terms_.front().coef), e);
    }
    if (prec_.is_finite() && ExtRat(target) > prec_ + (-m))
        fail(ErrorCode::PrecisionExhausted, "input precision cannot support inverse target");

    // a = c t^m (1 + u), v(u) > 0; 1/a = c^{-1} t^{-m} sum (-u)^k.
    uint16_t cinv = field_->inv(terms_.front().coef);
    HahnSeries lead_inv = monomial(field_, cinv, -m);
    HahnSeries u = (*this * lead_inv - constant(field_, 1)).truncated(ExtRat(target));
    Valuation vu = u.valuation();
    HahnSeries acc = constant(field_, 1);
    if (!(vu.bound.is_infinite() && vu.exact)) {
        if (vu.bound <= ExtRat(Rat(0)))
            fail(ErrorCode::PrecisionExhausted, "leading term not separated within precision");
        HahnSeries power = constant(field_, 1);
        const HahnSeries mu = -u;
        while (true) {
            power = (power * mu).truncated(ExtRat(target));
            Valuation vp = power.valuation();
            if (vp.bound >= ExtRat(target)) break;
            acc = acc + power;
        }
    }
    return (acc * lead_inv).truncated(ExtRat(target - m));
}

HahnSeries HahnSeries::frobenius(long long k) const {
    long long scale_num = 1, scale_den = 1;
    long long steps = k >= 0 ? k : -k;
    for (long long i = 0; i < steps; ++i) {
        if (k >= 0)
            scale_num *= field_->p();
        else
            scale_den *= field_->p();
        if (scale_num > (1LL << 40) || scale_den > (1LL << 40))
            fail(ErrorCode::CapExceeded, "frobenius power too large");
    }
    Rat scale(scale_num, scale_den);
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (const auto& t : terms_)
        terms.push_back({t.exp * scale, field_->frobenius(t.coef, k)});
    ExtRat prec = prec_.is_infinite() ? ExtRat::infinity() : ExtRat(prec_.finite() * scale);
    return make(field_, std::move(terms), prec);
}

HahnSeries HahnSeries::pow(long long e, const Rat& inv_target) const {
    if (e < 0) return inverse(inv_target).pow(-e, inv_target);
    HahnSeries r = constant(field_, 1);
    HahnSeries base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

HahnSeries HahnSeries::truncated(const ExtRat& new_prec) const {
    if (new_prec >= prec_) return *this;
    HahnSeries h = *this;
    h.prec_ = new_prec;
    h.normalize();
    return h;
}

HahnSeries HahnSeries::drop_from(const Rat& cap, bool* dropped) const {
    HahnSeries h = *this;
    std::vector<Term> kept;
    for (const auto& t : h.terms_) {
        if (t.exp < cap) {
            kept.push_back(t);
        } else if (dropped) {
            *dropped = true;
        }
    }
    h.terms_ = std::move(kept);
    return h;
}

bool operator==(const HahnSeries& a, const HahnSeries& b) {
    if (!a.field_ || !b.field_) return !a.field_ && !b.field_;
    if (!a.field_->same(*b.field_) || !(a.prec_ == b.prec_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].exp == b.terms_[i].exp) || a.terms_[i].coef != b.terms_[i].coef)
            return false;
    return true;
}

std::string HahnSeries::str() const {
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        std::string coef = field_->elem_str(t.coef);
        bool coef_composite = coef.find('+') != std::string::npos;
        if (coef_composite) coef = "(" + coef + ")";
        if (t.exp.is_zero()) {
            s += coef;
        } else {
            std::string mono = "t";
            if (!(t.exp == Rat(1)))
                mono += t.exp.is_integer() && t.exp.sign() > 0 ? "^" + t.exp.str()
                                                               : "^(" + t.exp.str() + ")";
            s += (coef == "1") ? mono : coef + "*" + mono;
        }
    }
    if (prec_.is_finite()) {
        std::string cap = "O(t^" +
                          (prec_.finite().is_integer() && prec_.finite().sign() > 0
                               ? prec_.finite().str()
                               : "(" + prec_.finite().str() + ")") +
                          ")";
        s = s.empty() ? cap : s + " + " + cap;
    }
    return s.empty() ? "0" : s;
}

} // namespace robba

#include "robba/tate.hpp"

#include <algorithm>
#include <deque>

namespace robba {

long long total_degree(const MultiIndex& I) {
    long long d = 0;
    for (uint32_t k : I) d += k;
    return d;
}

int graded_lex_cmp(const MultiIndex& I, const MultiIndex& J) {
    if (I.size() != J.size()) fail(ErrorCode::LengthMismatch, "multi-index lengths differ");
    long long di = total_degree(I), dj = total_degree(J);
    if (di != dj) return di < dj ? -1 : 1;
    for (size_t k = 0; k < I.size(); ++k)
        if (I[k] != J[k]) return I[k] < J[k] ? -1 : 1;
    return 0;
}

bool componentwise_leq(const MultiIndex& I, const MultiIndex& J) {
    if (I.size() != J.size()) fail(ErrorCode::LengthMismatch, "multi-index lengths differ");
    for (size_t k = 0; k < I.size(); ++k)
        if (I[k] > J[k]) return false;
    return true;
}

std::vector<MultiIndex> minimal_indices(const std::vector<MultiIndex>& S) {
    std::vector<MultiIndex> out;
    for (const auto& I : S) {
        bool minimal = true;
        for (const auto& J : S)
            if (!(J == I) && componentwise_leq(J, I)) {
                minimal = false;
                break;
            }
        if (minimal && std::find(out.begin(), out.end(), I) == out.end()) out.push_back(I);
    }
    return out;
}

TateSeries TateSeries::zero(FieldPtr field, std::vector<Rat> weights, const Rat& base_r) {
    TateSeries t;
    t.field_ = std::move(field);
    t.weights_ = std::move(weights);
    t.base_r_ = base_r;
    return t;
}

TateSeries TateSeries::make(FieldPtr field, std::vector<Rat> weights, const Rat& base_r,
                            TermMap terms, ExtRat term_floor) {
    TateSeries t;
    t.field_ = std::move(field);
    t.weights_ = std::move(weights);
    t.base_r_ = base_r;
    t.terms_ = std::move(terms);
    t.floor_ = term_floor;
    t.normalize();
    return t;
}

TateSeries TateSeries::monomial(std::vector<Rat> weights, const Rat& base_r, const WittSeries& c,
                                const MultiIndex& I) {
    TermMap terms;
    terms.emplace(I, c);
    return make(c.field(), std::move(weights), base_r, std::move(terms));
}

void TateSeries::normalize() {
    if (!field_) fail(ErrorCode::InvalidArgument, "Tate series without field context");
    if (!(Rat(0) < base_r_)) fail(ErrorCode::InvalidArgument, "base radius must be positive");
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first.size() != weights_.size())
            fail(ErrorCode::LengthMismatch, "term index length differs from variable count");
        require_same_field(*field_, *it->second.field());
        if (!it->second.integral_role())
            fail(ErrorCode::InvalidArgument, "Tate coefficients must be in the integral role");
        if (it->second.is_zero()) {
            it = terms_.erase(it);
            continue;
        }
        if (it->second.no_terms()) {
            // Possibly-zero coefficient: fold its bound into the term floor.
            ExtRat hb = ExtRat::infinity();
            for (const auto& p : it->second.hidden_bounds())
                hb = min(hb, ExtRat(Rat(p.n) + base_r_ * p.v));
            floor_ = min(floor_, hb + weight(it->first));
            it = terms_.erase(it);
            continue;
        }
        ++it;
    }
}

Rat TateSeries::weight(const MultiIndex& I) const {
    Rat w(0);
    for (size_t k = 0; k < I.size(); ++k) w += Rat((long long)I[k]) * weights_[k];
    return w;
}

ExtRat TateSeries::term_exponent(const MultiIndex& I) const {
    auto it = terms_.find(I);
    if (it == terms_.end()) return ExtRat::infinity();
    return it->second.gauss_norm(base_r_).value + weight(I);
}

namespace {

void require_compatible(const TateSeries& a, const TateSeries& b) {
    require_same_field(*a.field(), *b.field());
    if (a.weights() != b.weights() || !(a.base_r() == b.base_r()))
        fail(ErrorCode::InvalidArgument, "Tate series from different algebra contexts");
}

} // namespace

TateSeries operator+(const TateSeries& a, const TateSeries& b) {
    require_compatible(a, b);
    TateSeries::TermMap terms = a.terms();
    for (const auto& [I, c] : b.terms()) {
        auto it = terms.find(I);
        if (it == terms.end())
            terms.emplace(I, c);
        else
            it->second = it->second + c;
    }
    return TateSeries::make(a.field(), a.weights(), a.base_r(), std::move(terms),
                            min(a.term_floor(), b.term_floor()));
}

TateSeries TateSeries::operator-() const {
    TateSeries t = *this;
    for (auto& [I, c] : t.terms_) c = -c;
    return t;
}

TateSeries operator-(const TateSeries& a, const TateSeries& b) { return a + (-b); }

TateSeries TateSeries::monomial_mul(const WittSeries& c, const MultiIndex& delta) const {
    if (c.is_zero()) return zero(field_, weights_, base_r_);
    TermMap terms;
    for (const auto& [I, coeff] : terms_) {
        MultiIndex J = I;
        for (size_t k = 0; k < J.size(); ++k) J[k] += delta[k];
        terms.emplace(std::move(J), coeff * c);
    }
    ExtRat floor = floor_;
    if (floor.is_finite())
        floor = floor + weight(delta) + c.gauss_norm(base_r_).lower_bound.finite();
    return make(field_, weights_, base_r_, std::move(terms), floor);
}

TateSeries operator*(const TateSeries& a, const TateSeries& b) {
    require_compatible(a, b);
    TateSeries acc = TateSeries::zero(a.field(), a.weights(), a.base_r());
    for (const auto& [I, c] : b.terms()) acc = acc + a.monomial_mul(c, I);
    // Hidden content of either factor times the other factor.
    ExtRat floor = ExtRat::infinity();
    if (a.term_floor().is_finite()) {
        ExtRat nb = b.weighted_norm().lower_bound;
        if (nb.is_finite()) floor = min(floor, a.term_floor() + nb.finite());
        if (b.term_floor().is_finite()) floor = min(floor, a.term_floor() + b.term_floor());
    }
    if (b.term_floor().is_finite()) {
        ExtRat na = a.weighted_norm().lower_bound;
        if (na.is_finite()) floor = min(floor, b.term_floor() + na.finite());
    }
    return TateSeries::make(acc.field(), acc.weights(), acc.base_r(), acc.terms(),
                            min(acc.term_floor(), floor));
}

NormExponent TateSeries::weighted_norm() const {
    ExtRat value = ExtRat::infinity();
    ExtRat lower = floor_;
    for (const auto& [I, c] : terms_) {
        NormExponent e = c.gauss_norm(base_r_);
        Rat w = weight(I);
        value = min(value, e.value + w);
        lower = min(lower, e.lower_bound + w);
    }
    return {value, min(value, lower)};
}

TateSeries TateSeries::clipped(const ExtRat& floor) const {
    if (floor.is_infinite()) return *this;
    TateSeries t = *this;
    TermMap kept;
    bool any = false;
    for (auto& [I, c] : t.terms_) {
        Rat w = weight(I);
        bool dropped = false;
        WittSeries cc = c.clipped(Interval::point(base_r_), floor + (-w), &dropped);
        any = any || dropped;
        if (!cc.is_zero()) kept.emplace(I, std::move(cc));
    }
    t.terms_ = std::move(kept);
    if (any) t.floor_ = min(t.floor_, floor);
    t.normalize();
    return t;
}

bool operator==(const TateSeries& a, const TateSeries& b) {
    if (!a.field_ || !b.field_) return !a.field_ && !b.field_;
    if (!a.field_->same(*b.field_) || a.weights_ != b.weights_ || !(a.base_r_ == b.base_r_))
        return false;
    return a.terms_ == b.terms_ && a.floor_ == b.floor_;
}

LeadingData leading_data(const TateSeries& f) {
    if (f.is_zero()) fail(ErrorCode::ZeroInput, "leading data of zero");
    if (f.no_terms()) fail(ErrorCode::PrecisionExhausted, "leading data hidden by precision");
    NormExponent norm = f.weighted_norm();
    // Attaining terms must be exactly known and everything else strictly
    // separated, or a hidden term could steal the maximal index.
    if (!(f.term_floor() > norm.value))
        fail(ErrorCode::PrecisionExhausted, "term floor reaches the norm level");
    const MultiIndex* best = nullptr;
    for (const auto& [I, c] : f.terms()) {
        NormExponent e = c.gauss_norm(f.base_r());
        Rat w = f.weight(I);
        if (e.value + w == norm.value) {
            if (!e.reliable())
                fail(ErrorCode::PrecisionExhausted, "norm-attaining coefficient unreliable");
            if (!best || graded_lex_cmp(I, *best) > 0) best = &I;
        } else if (!(e.lower_bound + w > norm.value)) {
            fail(ErrorCode::PrecisionExhausted, "term not provably separated from the norm level");
        }
    }
    LeadingData ld;
    ld.index = *best;
    ld.coeff = f.terms().at(*best);
    ld.coeff_degree = *degree(ld.coeff, f.base_r());
    return ld;
}

namespace {

struct Generator {
    const TateSeries* g;
    LeadingData lead;
};

// Reducibility of the stored term (J, c) and the preferred generator:
// smallest leading-coefficient degree among index-covering candidates
// whose pivot degree does not exceed deg(c), ties to the earliest.
std::optional<size_t> pick_generator(const std::vector<Generator>& gens, const MultiIndex& J,
                                     long long coeff_deg) {
    std::optional<size_t> best;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (!componentwise_leq(gens[i].lead.index, J)) continue;
        if (gens[i].lead.coeff_degree > coeff_deg) continue;
        if (!best || gens[i].lead.coeff_degree < gens[*best].lead.coeff_degree) best = i;
    }
    return best;
}

MultiIndex index_sub(const MultiIndex& J, const MultiIndex& I) {
    MultiIndex d(J.size());
    for (size_t k = 0; k < J.size(); ++k) d[k] = J[k] - I[k];
    return d;
}

} // namespace

ReduceResult reduce(const TateSeries& y, const std::vector<TateSeries>& G,
                    const Rat& stop_exponent, const TateOptions& opts) {
    if (G.empty()) fail(ErrorCode::InvalidArgument, "empty generator list");
    std::vector<Generator> gens;
    gens.reserve(G.size());
    for (const auto& g : G) {
        require_compatible(y, g);
        gens.push_back({&g, leading_data(g)});
    }

    // Physical truncation happens well below the reducibility threshold, so
    // below-stop terms stay visible in the remainder.
    const ExtRat stop(stop_exponent);
    const ExtRat deep_floor(stop_exponent + Rat(32));

    ReduceResult res;
    res.cofactors.assign(G.size(), TateSeries::zero(y.field(), y.weights(), y.base_r()));
    TateSeries active = y.clipped(deep_floor);

    while (true) {
        if (opts.div.cancel && opts.div.cancel->load())
            fail(ErrorCode::Cancelled, "reduction cancelled");
        if (++res.steps > opts.max_steps)
            fail(ErrorCode::PrecisionExhausted, "reduction step budget exhausted");

        // Pick the reducible stored term with the smallest exponent, ties to
        // the graded-lex-largest index.
        const MultiIndex* pick = nullptr;
        ExtRat pick_exp = ExtRat::infinity();
        size_t pick_gen = 0;
        for (const auto& [J, c] : active.terms()) {
            NormExponent e = c.gauss_norm(active.base_r());
            if (!e.reliable())
                fail(ErrorCode::PrecisionExhausted, "term norm unreliable during reduction");
            ExtRat te = e.value + active.weight(J);
            if (te >= stop) continue;
            auto gi = pick_generator(gens, J, *degree(c, active.base_r()));
            if (!gi) continue;
            if (te < pick_exp || (te == pick_exp && pick && graded_lex_cmp(J, *pick) > 0)) {
                pick_exp = te;
                pick = &J;
                pick_gen = *gi;
            }
        }
        if (!pick) break;

        const Generator& gen = gens[pick_gen];
        MultiIndex delta = index_sub(*pick, gen.lead.index);
        const WittSeries& cj = active.terms().at(*pick);
        Rat coeff_stop = stop_exponent - active.weight(*pick);
        DivisionResult div = divide(cj, gen.lead.coeff, active.base_r(), coeff_stop, opts.div);
        if (div.status == DivStatus::PrecisionExhausted)
            fail(ErrorCode::PrecisionExhausted, "coefficient division lost precision");
        if (div.quotient.no_terms())
            fail(ErrorCode::PrecisionExhausted, "reduction produced an empty quotient");

        TateSeries update = gen.g->monomial_mul(div.quotient, delta);
        // The contraction invariant: the update only touches graded-lex-larger
        // indices strictly above the current level.
        for (const auto& [J, c] : update.terms()) {
            if (graded_lex_cmp(J, *pick) <= 0) continue;
            ExtRat te = c.gauss_norm(active.base_r()).value + active.weight(J);
            if (!(te > pick_exp))
                fail(ErrorCode::PrecisionExhausted, "support contraction invariant violated");
        }
        res.cofactors[pick_gen] =
            res.cofactors[pick_gen] +
            TateSeries::monomial(y.weights(), y.base_r(), div.quotient, delta);
        active = (active - update).clipped(deep_floor);
    }

    res.remainder = active;

    // Norm discipline: |a_i| |g_i| <= |y|.
    ExtRat ey = y.weighted_norm().value;
    for (size_t i = 0; i < res.cofactors.size(); ++i) {
        if (res.cofactors[i].no_terms()) continue;
        ExtRat ea = res.cofactors[i].weighted_norm().value;
        ExtRat eg = gens[i].g->weighted_norm().value;
        if (ea.is_finite() && eg.is_finite() && ey.is_finite() &&
            ea.finite() + eg.finite() < ey.finite())
            fail(ErrorCode::PrecisionExhausted, "cofactor norm discipline violated");
    }
    return res;
}

namespace {

// -log_p of the Lemma contraction factor: the smallest exponent gap between
// any generator's lead and its graded-lex-larger terms.
ExtRat reduction_gap(const std::vector<TateSeries>& G) {
    ExtRat gap = ExtRat::infinity();
    for (const auto& g : G) {
        LeadingData ld = leading_data(g);
        ExtRat lead_exp = g.term_exponent(ld.index);
        for (const auto& [J, c] : g.terms()) {
            if (graded_lex_cmp(J, ld.index) <= 0) continue;
            ExtRat te = c.gauss_norm(g.base_r()).value + g.weight(J);
            gap = min(gap, te + (-lead_exp.finite()));
        }
        if (g.term_floor().is_finite())
            gap = min(gap, g.term_floor() + (-lead_exp.finite()));
    }
    return gap;
}

} // namespace

MembershipResult membership(const TateSeries& y, const std::vector<TateSeries>& G,
                            const Rat& target_exponent, const TateOptions& opts) {
    MembershipResult res;
    res.eps_gap = reduction_gap(G);
    res.certificate.assign(G.size(), TateSeries::zero(y.field(), y.weights(), y.base_r()));
    res.residual = TateSeries::zero(y.field(), y.weights(), y.base_r());

    TateSeries cur = y;
    const ExtRat target(target_exponent);
    long long rounds = 0;
    while (true) {
        if (++rounds > opts.max_steps)
            fail(ErrorCode::PrecisionExhausted, "membership round budget exhausted");
        if (cur.no_terms()) {
            res.member = true;
            return res;
        }
        ExtRat level = cur.weighted_norm().value;
        if (level >= target) {
            res.member = true;
            res.residual = cur;
            return res;
        }
        res.round_exponents.push_back(level);
        ExtRat round_floor = min(target, level + res.eps_gap);
        Rat floor_fin = round_floor.is_finite() ? round_floor.finite() : target_exponent;
        ReduceResult rr = reduce(cur, G, floor_fin, opts);
        for (size_t i = 0; i < G.size(); ++i)
            res.certificate[i] = res.certificate[i] + rr.cofactors[i];
        cur = rr.remainder;
        // A stored term below the round floor survived the pass: irreducible.
        for (const auto& [J, c] : cur.terms()) {
            ExtRat te = c.gauss_norm(cur.base_r()).value + cur.weight(J);
            if (te < ExtRat(floor_fin)) {
                res.member = false;
                res.residual = cur;
                return res;
            }
        }
    }
}

CompletionResult strong_complete(const std::vector<TateSeries>& G, long long rounds,
                                 const TateOptions& opts) {
    if (G.empty()) fail(ErrorCode::InvalidArgument, "empty generator list");
    CompletionResult res;
    const TateSeries& g0 = G.front();
    auto zero_ts = [&] { return TateSeries::zero(g0.field(), g0.weights(), g0.base_r()); };

    // Seed basis and identity certificates.
    for (size_t i = 0; i < G.size(); ++i) {
        if (G[i].no_terms()) continue;
        res.generators.push_back(G[i]);
        std::vector<TateSeries> cert(G.size(), zero_ts());
        MultiIndex zero_idx(g0.nvars(), 0);
        cert[i] = TateSeries::monomial(g0.weights(), g0.base_r(), WittSeries::one(g0.field()),
                                       zero_idx);
        res.certificates.push_back(std::move(cert));
    }
    if (res.generators.empty()) fail(ErrorCode::ZeroInput, "all generators are zero");

    const Rat residual_target = opts.div.work_prec / Rat(3);
    std::deque<std::pair<size_t, size_t>> queue;
    for (size_t i = 0; i < res.generators.size(); ++i)
        for (size_t j = i + 1; j < res.generators.size(); ++j) queue.push_back({i, j});

    auto reduce_and_add = [&](const TateSeries& cand, const std::vector<TateSeries>& cand_cert) {
        if (cand.no_terms()) return;
        ReduceResult rr = reduce(cand, res.generators, residual_target, opts);
        if (rr.remainder.no_terms()) return;
        // Discard content that is pure below-floor noise.
        NormExponent nw = rr.remainder.weighted_norm();
        if (nw.value >= ExtRat(residual_target)) return;
        std::vector<TateSeries> cert = cand_cert;
        for (size_t k = 0; k < res.generators.size(); ++k) {
            if (rr.cofactors[k].no_terms()) continue;
            for (size_t i = 0; i < cert.size(); ++i)
                cert[i] = cert[i] - rr.cofactors[k] * res.certificates[k][i];
        }
        size_t id = res.generators.size();
        res.generators.push_back(rr.remainder);
        res.certificates.push_back(std::move(cert));
        for (size_t i = 0; i < id; ++i) queue.push_back({i, id});
    };

    while (!queue.empty()) {
        if (opts.div.cancel && opts.div.cancel->load())
            fail(ErrorCode::Cancelled, "completion cancelled");
        if (res.pairs_processed >= rounds) {
            res.complete = false;
            return res;
        }
        ++res.pairs_processed;
        auto [i, j] = queue.front();
        queue.pop_front();

        LeadingData li = leading_data(res.generators[i]);
        LeadingData lj = leading_data(res.generators[j]);
        MultiIndex M(li.index.size());
        for (size_t k = 0; k < M.size(); ++k) M[k] = std::max(li.index[k], lj.index[k]);
        if (total_degree(M) > opts.degree_cap) {
            res.complete = false;
            continue;
        }

        GcdResult gg = gcd_bezout(li.coeff, lj.coeff, g0.base_r(), residual_target, opts.div);
        DivisionResult qi = divide(li.coeff, gg.g, g0.base_r(), residual_target, opts.div);
        DivisionResult qj = divide(lj.coeff, gg.g, g0.base_r(), residual_target, opts.div);
        if (qi.status == DivStatus::PrecisionExhausted || qj.status == DivStatus::PrecisionExhausted)
            fail(ErrorCode::PrecisionExhausted, "completion cofactor division lost precision");

        MultiIndex di = index_sub(M, li.index), dj = index_sub(M, lj.index);
        // S-pair: cancel the leading coefficients through the lcm.
        TateSeries spair = res.generators[i].monomial_mul(qj.quotient, di) -
                           res.generators[j].monomial_mul(qi.quotient, dj);
        std::vector<TateSeries> scert(res.certificates[i].size(), zero_ts());
        for (size_t k = 0; k < scert.size(); ++k)
            scert[k] = res.certificates[i][k].monomial_mul(qj.quotient, di) -
                       res.certificates[j][k].monomial_mul(qi.quotient, dj);
        reduce_and_add(spair, scert);

        // gcd-pair: realize the coefficient gcd at the joint index.
        TateSeries gpair = res.generators[i].monomial_mul(gg.a, di) +
                           res.generators[j].monomial_mul(gg.b, dj);
        std::vector<TateSeries> gcert(res.certificates[i].size(), zero_ts());
        for (size_t k = 0; k < gcert.size(); ++k)
            gcert[k] = res.certificates[i][k].monomial_mul(gg.a, di) +
                       res.certificates[j][k].monomial_mul(gg.b, dj);
        reduce_and_add(gpair, gcert);
    }
    return res;
}

} // namespace robba

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "robba/euclidean.hpp"
#include "robba/witt.hpp"

namespace robba {

using MultiIndex = std::vector<uint32_t>;

long long total_degree(const MultiIndex& I);
/// Graded lexicographic comparison: total degree first, then leftmost
/// differing entry. Returns <0, 0, >0. Throws LengthMismatch.
int graded_lex_cmp(const MultiIndex& I, const MultiIndex& J);
bool componentwise_leq(const MultiIndex& I, const MultiIndex& J);
/// Elements of S minimal under the componentwise partial order.
std::vector<MultiIndex> minimal_indices(const std::vector<MultiIndex>& S);

struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return graded_lex_cmp(a, b) < 0;
    }
};

/// Element of the weighted Tate algebra A^r{T_1/rho_1,...,T_n/rho_n}:
/// finitely many multi-index terms with A^r-role WittSeries coefficients.
/// Radii are carried in log form (rho_i = p^{-w_i}); the weighted norm
/// exponent of c*T^I is exponent_r(c) + sum_k I_k*w_k. `term_floor` is the
/// truncation floor: content with weighted exponent >= term_floor may have
/// been dropped and is accounted for in norm lower bounds.
class TateSeries {
public:
    using TermMap = std::map<MultiIndex, WittSeries, GradedLexLess>;

    TateSeries() = default;
    static TateSeries zero(FieldPtr field, std::vector<Rat> weights, const Rat& base_r);
    static TateSeries make(FieldPtr field, std::vector<Rat> weights, const Rat& base_r,
                           TermMap terms, ExtRat term_floor = ExtRat::infinity());
    /// c * T^I.
    static TateSeries monomial(std::vector<Rat> weights, const Rat& base_r, const WittSeries& c,
                               const MultiIndex& I);

    const FieldPtr& field() const { return field_; }
    size_t nvars() const { return weights_.size(); }
    const std::vector<Rat>& weights() const { return weights_; }
    const Rat& base_r() const { return base_r_; }
    const TermMap& terms() const { return terms_; }
    const ExtRat& term_floor() const { return floor_; }

    bool no_terms() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && floor_.is_infinite(); }

    Rat weight(const MultiIndex& I) const;
    /// Weighted exponent of the stored term at I (its coefficient's value).
    ExtRat term_exponent(const MultiIndex& I) const;

    friend TateSeries operator+(const TateSeries& a, const TateSeries& b);
    friend TateSeries operator-(const TateSeries& a, const TateSeries& b);
    friend TateSeries operator*(const TateSeries& a, const TateSeries& b);
    TateSeries operator-() const;
    /// Multiply by c * T^delta.
    TateSeries monomial_mul(const WittSeries& c, const MultiIndex& delta) const;

    NormExponent weighted_norm() const;
    /// Drop stored content with weighted exponent >= floor (folded into the
    /// term floor, never lost silently).
    TateSeries clipped(const ExtRat& floor) const;

    friend bool operator==(const TateSeries& a, const TateSeries& b);

private:
    void normalize();

    FieldPtr field_;
    std::vector<Rat> weights_;
    Rat base_r_;
    TermMap terms_;
    ExtRat floor_ = ExtRat::infinity();
};

/// Leading structure: the graded-lex-maximal index among the norm-attaining
/// terms, its coefficient, and that coefficient's degree at base_r.
struct LeadingData {
    MultiIndex index;
    WittSeries coeff;
    long long coeff_degree;
};

LeadingData leading_data(const TateSeries& f);

struct TateOptions {
    DivOptions div;
    long long max_steps = 100000;
    /// Completion: cap on the total degree of pair indices.
    long long degree_cap = 64;
};

struct ReduceResult {
    std::vector<TateSeries> cofactors;
    TateSeries remainder;
    long long steps = 0;
};

/// Gröbner-style reduction against a finite generator list: y = sum a_i g_i
/// + w where every stored term of w is below stop_exponent or irreducible
/// (no generator's leading index divides it with a coefficient-degree drop).
/// Norm discipline |a_i|*|g_i| <= |y| holds per cofactor.
ReduceResult reduce(const TateSeries& y, const std::vector<TateSeries>& G,
                    const Rat& stop_exponent, const TateOptions& opts = {});

struct MembershipResult {
    bool member = false;
    std::vector<TateSeries> certificate;
    TateSeries residual;
    /// Norm exponent level at the start of each round.
    std::vector<ExtRat> round_exponents;
    /// - log_p of the reduction contraction factor computed from G.
    ExtRat eps_gap;
};

/// Iterated reduction with per-round geometric decay: each round eliminates
/// every reducible term below (current level + eps_gap). Members reach the
/// target with a certificate; non-members stabilize at a nonzero remainder.
MembershipResult membership(const TateSeries& y, const std::vector<TateSeries>& G,
                            const Rat& target_exponent, const TateOptions& opts = {});

struct CompletionResult {
    std::vector<TateSeries> generators;
    /// generators[k] = sum_i certificates[k][i] * G_original[i].
    std::vector<std::vector<TateSeries>> certificates;
    bool complete = true;
    long long pairs_processed = 0;
};

/// S-pair / gcd-pair completion over the Euclidean coefficient ring,
/// bounded by a round budget; when the budget or degree cap is hit the
/// result is flagged incomplete rather than silently truncated.
CompletionResult strong_complete(const std::vector<TateSeries>& G, long long rounds,
                                 const TateOptions& opts = {});

} // namespace robba

#include "robba/fq.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace robba {

namespace {

struct ModulusEntry {
    int p, f;
    std::vector<int> coeffs; // c_0..c_f, monic
};

// Fixed irreducibles per supported (p, f); verified at construction.
const ModulusEntry kModuli[] = {
    {2, 1, {1, 1}},
    {2, 2, {1, 1, 1}},
    {2, 3, {1, 1, 0, 1}},
    {2, 4, {1, 1, 0, 0, 1}},
    {2, 5, {1, 0, 1, 0, 0, 1}},
    {2, 6, {1, 1, 0, 1, 1, 0, 1}},
    {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
    {2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
    {3, 1, {1, 1}},
    {3, 2, {2, 2, 1}},
    {3, 3, {1, 2, 0, 1}},
    {3, 4, {2, 0, 0, 2, 1}},
    {3, 5, {1, 2, 0, 0, 0, 1}},
    {5, 1, {3, 1}},
    {5, 2, {2, 4, 1}},
    {5, 3, {3, 3, 0, 1}},
    {7, 1, {4, 1}},
    {7, 2, {3, 6, 1}},
};

// Digit vector <-> packed index, digits base p, least significant first.
std::vector<int> unpack(uint16_t a, int p, int f) {
    std::vector<int> d(f, 0);
    for (int i = 0; i < f; ++i) {
        d[i] = a % p;
        a = (uint16_t)(a / p);
    }
    return d;
}

uint16_t pack(const std::vector<int>& d, int p) {
    long long a = 0;
    for (size_t i = d.size(); i-- > 0;) a = a * p + d[i];
    return (uint16_t)a;
}

// Multiply two basis polynomials mod the modulus, digits mod p.
uint16_t poly_mul(uint16_t a, uint16_t b, int p, int f, const std::vector<int>& mod) {
    std::vector<int> da = unpack(a, p, f), db = unpack(b, p, f);
    std::vector<int> prod(2 * f - 1, 0);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    for (int k = 2 * f - 2; k >= f; --k) {
        int c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        // x^k = x^(k-f) * (-(c_0 + ... + c_{f-1} x^{f-1}))
        for (int i = 0; i < f; ++i) {
            int sub = (c * mod[i]) % p;
            prod[k - f + i] = ((prod[k - f + i] - sub) % p + p) % p;
        }
    }
    prod.resize(f);
    return pack(prod, p);
}

bool is_irreducible(const std::vector<int>& mod, int p) {
    int f = (int)mod.size() - 1;
    if (f == 1) return true;
    // Trial division by every monic polynomial of degree 1..f/2.
    for (int d = 1; 2 * d <= f; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long idx = 0; idx < count; ++idx) {
            std::vector<int> div(d + 1, 0);
            long long t = idx;
            for (int i = 0; i < d; ++i) {
                div[i] = (int)(t % p);
                t /= p;
            }
            div[d] = 1;
            // Long division of mod by div over F_p; check remainder.
            std::vector<int> rem = mod;
            for (int k = f; k >= d; --k) {
                int c = rem[k] % p;
                if (c == 0) continue;
                for (int i = 0; i <= d; ++i)
                    rem[k - d + i] = ((rem[k - d + i] - c * div[i]) % p + p) % p;
            }
            bool zero = true;
            for (int i = 0; i < d; ++i)
                if (rem[i] % p != 0) zero = false;
            if (zero) return false;
        }
    }
    return true;
}

} // namespace

Field::Field(int p, int f, int denom_cap) : p_(p), f_(f), denom_cap_(denom_cap) {
    bool prime = p >= 2;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
    if (!prime) fail(ErrorCode::InvalidArgument, "p must be prime");
    if (f < 1) fail(ErrorCode::InvalidArgument, "q-degree must be >= 1");
    if (denom_cap < 0) fail(ErrorCode::InvalidArgument, "denominator cap must be >= 0");

    const ModulusEntry* entry = nullptr;
    for (const auto& e : kModuli)
        if (e.p == p && e.f == f) entry = &e;
    if (!entry)
        fail(ErrorCode::InvalidArgument,
             "unsupported field F_" + std::to_string(p) + "^" + std::to_string(f));
    modulus_ = entry->coeffs;
    if (!is_irreducible(modulus_, p))
        fail(ErrorCode::InvalidArgument, "modulus table entry is reducible");

    long long q = 1;
    for (int i = 0; i < f; ++i) q *= p;
    if (q > 256) fail(ErrorCode::InvalidArgument, "q too large");
    q_ = (int)q;

    add_.resize((size_t)q_ * q_);
    mul_.resize((size_t)q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    frob_.resize(q_);
    for (int a = 0; a < q_; ++a) {
        std::vector<int> da = unpack((uint16_t)a, p_, f_);
        std::vector<int> dn(f_);
        for (int i = 0; i < f_; ++i) dn[i] = (p_ - da[i]) % p_;
        neg_[a] = pack(dn, p_);
        for (int b = 0; b < q_; ++b) {
            std::vector<int> db = unpack((uint16_t)b, p_, f_);
            std::vector<int> ds(f_);
            for (int i = 0; i < f_; ++i) ds[i] = (da[i] + db[i]) % p_;
            add_[(size_t)a * q_ + b] = pack(ds, p_);
            mul_[(size_t)a * q_ + b] = poly_mul((uint16_t)a, (uint16_t)b, p_, f_, modulus_);
        }
    }
    for (int a = 1; a < q_; ++a) {
        for (int b = 1; b < q_; ++b)
            if (mul_[(size_t)a * q_ + b] == 1) inv_[a] = (uint16_t)b;
        if (inv_[a] == 0) fail(ErrorCode::InvalidArgument, "field table has a non-unit");
        uint16_t x = (uint16_t)a;
        for (int i = 1; i < p_; ++i) x = mul(x, (uint16_t)a);
        frob_[a] = x;
    }
    frob_[0] = 0;
}

FieldPtr Field::get(int p, int f, int denom_cap) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, f, denom_cap);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ptr = std::make_shared<const Field>(p, f, denom_cap);
    cache.emplace(key, ptr);
    return ptr;
}

uint16_t Field::pow(uint16_t a, long long e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    uint16_t r = 1, base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

uint16_t Field::frobenius(uint16_t a, long long k) const {
    long long steps = ((k % f_) + f_) % f_;
    uint16_t r = a;
    for (long long i = 0; i < steps; ++i) r = frob_[r];
    return r;
}

void Field::check_exponent(const Rat& e) const {
    long long den = e.den();
    int j = 0;
    while (den % p_ == 0) {
        den /= p_;
        ++j;
    }
    if (den != 1)
        fail(ErrorCode::CapExceeded, "exponent denominator " + std::to_string(e.den()) +
                                         " is not a power of p=" + std::to_string(p_));
    if (j > denom_cap_)
        fail(ErrorCode::CapExceeded, "exponent denominator exceeds p^" + std::to_string(denom_cap_));
}

std::string Field::elem_str(uint16_t a) const {
    if (f_ == 1 || a < p_) return std::to_string(a % p_);
    std::string s;
    auto d = unpack(a, p_, f_);
    for (int i = 0; i < f_; ++i) {
        if (d[i] == 0) continue;
        std::string term;
        if (i == 0) {
            term = std::to_string(d[i]);
        } else {
            term = (d[i] == 1) ? "" : std::to_string(d[i]) + "*";
            term += "g";
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (!s.empty()) s += "+";
        s += term;
    }
    return s.empty() ? "0" : s;
}

} // namespace robba

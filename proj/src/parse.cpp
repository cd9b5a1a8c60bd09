#include "robba/parse.hpp"

#include <cctype>

namespace robba {

namespace {

struct Token {
    enum Kind { Ident, Int, Plus, Minus, Star, Caret, Slash, LParen, RParen, LBracket, RBracket, End };
    Kind kind;
    std::string text;
    size_t pos;
};

[[noreturn]] void syntax_error(const std::string& msg, size_t pos) {
    fail(ErrorCode::SyntaxError, msg + " at position " + std::to_string(pos));
}

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    void expect(Token::Kind k, const char* what) {
        if (tok_.kind != k) syntax_error(std::string("expected ") + what, tok_.pos);
        advance();
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_ = {Token::End, "", i_};
            return;
        }
        char c = s_[i_];
        if (std::isdigit((unsigned char)c)) {
            size_t j = i_;
            while (j < s_.size() && std::isdigit((unsigned char)s_[j])) ++j;
            tok_ = {Token::Int, s_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        if (std::isalpha((unsigned char)c)) {
            size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum((unsigned char)s_[j]) || s_[j] == '_'))
                ++j;
            tok_ = {Token::Ident, s_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        Token::Kind k;
        switch (c) {
            case '+': k = Token::Plus; break;
            case '-': k = Token::Minus; break;
            case '*': k = Token::Star; break;
            case '^': k = Token::Caret; break;
            case '/': k = Token::Slash; break;
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            case '[': k = Token::LBracket; break;
            case ']': k = Token::RBracket; break;
            default: syntax_error("unexpected character", i_);
        }
        tok_ = {k, std::string(1, c), i_};
        ++i_;
    }

    const std::string& s_;
    size_t i_ = 0;
    Token tok_{Token::End, "", 0};
};

long long to_ll(const std::string& s, size_t pos) {
    try {
        return std::stoll(s);
    } catch (...) {
        syntax_error("integer out of range", pos);
    }
}

// Signed rational exponent: INT, -INT, or ( a / b ) with optional sign.
Rat parse_exponent(Lexer& lex) {
    bool neg = false;
    bool parens = false;
    if (lex.peek().kind == Token::LParen) {
        parens = true;
        lex.take();
    }
    if (lex.peek().kind == Token::Minus) {
        neg = true;
        lex.take();
    }
    if (lex.peek().kind != Token::Int) syntax_error("expected integer", lex.peek().pos);
    Token num = lex.take();
    long long n = to_ll(num.text, num.pos);
    long long d = 1;
    if (parens && lex.peek().kind == Token::Slash) {
        lex.take();
        if (lex.peek().kind != Token::Int) syntax_error("expected denominator", lex.peek().pos);
        Token den = lex.take();
        d = to_ll(den.text, den.pos);
    }
    if (parens) lex.expect(Token::RParen, ")");
    Rat r(n, d);
    return neg ? -r : r;
}

// ---- Hahn-level parsing ----

HahnSeries parse_hahn_expr(Lexer& lex, const ParseContext& ctx);

HahnSeries parse_hahn_primary(Lexer& lex, const ParseContext& ctx) {
    const Token& t = lex.peek();
    if (t.kind == Token::Int) {
        Token tok = lex.take();
        return HahnSeries::constant(ctx.field, ctx.field->from_int(to_ll(tok.text, tok.pos)));
    }
    if (t.kind == Token::Ident) {
        if (t.text == "t") {
            lex.take();
            Rat e(1);
            if (lex.peek().kind == Token::Caret) {
                lex.take();
                e = parse_exponent(lex);
            }
            return HahnSeries::monomial(ctx.field, 1, e);
        }
        if (t.text == "g") {
            lex.take();
            long long e = 1;
            if (lex.peek().kind == Token::Caret) {
                lex.take();
                Rat r = parse_exponent(lex);
                if (!r.is_integer()) syntax_error("generator power must be an integer", t.pos);
                e = r.num();
            }
            return HahnSeries::constant(ctx.field, ctx.field->pow(ctx.field->gen(), e));
        }
        if (t.text == "O") {
            lex.take();
            lex.expect(Token::LParen, "(");
            const Token& v = lex.peek();
            if (v.kind != Token::Ident || v.text != "t") syntax_error("expected t in O(...)", v.pos);
            lex.take();
            Rat e(1);
            if (lex.peek().kind == Token::Caret) {
                lex.take();
                e = parse_exponent(lex);
            }
            lex.expect(Token::RParen, ")");
            return HahnSeries::zero_mod(ctx.field, e);
        }
        syntax_error("unexpected name '" + t.text + "' in coefficient expression", t.pos);
    }
    if (t.kind == Token::LParen) {
        lex.take();
        HahnSeries inner = parse_hahn_expr(lex, ctx);
        lex.expect(Token::RParen, ")");
        return inner;
    }
    syntax_error("unexpected token in coefficient expression", t.pos);
}

HahnSeries parse_hahn_factor(Lexer& lex, const ParseContext& ctx) {
    HahnSeries base = parse_hahn_primary(lex, ctx);
    if (lex.peek().kind == Token::Caret) {
        Token caret = lex.take();
        Rat e = parse_exponent(lex);
        if (!e.is_integer()) syntax_error("power of a composite must be an integer", caret.pos);
        base = base.pow(e.num(), ctx.work_prec);
    }
    return base;
}

HahnSeries parse_hahn_term(Lexer& lex, const ParseContext& ctx) {
    HahnSeries acc = parse_hahn_factor(lex, ctx);
    while (lex.peek().kind == Token::Star) {
        lex.take();
        acc = acc * parse_hahn_factor(lex, ctx);
    }
    return acc;
}

HahnSeries parse_hahn_expr(Lexer& lex, const ParseContext& ctx) {
    bool neg = false;
    if (lex.peek().kind == Token::Minus) {
        neg = true;
        lex.take();
    } else if (lex.peek().kind == Token::Plus) {
        lex.take();
    }
    HahnSeries acc = parse_hahn_term(lex, ctx);
    if (neg) acc = -acc;
    while (lex.peek().kind == Token::Plus || lex.peek().kind == Token::Minus) {
        bool sub = lex.take().kind == Token::Minus;
        HahnSeries term = parse_hahn_term(lex, ctx);
        acc = sub ? acc - term : acc + term;
    }
    return acc;
}

// ---- Element-level parsing (Witt or Tate) ----

struct Value {
    bool is_tate = false;
    WittSeries w;
    TateSeries t;
};

TateSeries promote(const Value& v, const ParseContext& ctx) {
    if (v.is_tate) return v.t;
    MultiIndex zero(ctx.weights.size(), 0);
    return TateSeries::monomial(ctx.weights, ctx.base_r, v.w, zero);
}

Value val_add(const Value& a, const Value& b, const ParseContext& ctx) {
    if (!a.is_tate && !b.is_tate) return {false, a.w + b.w, {}};
    return {true, {}, promote(a, ctx) + promote(b, ctx)};
}

Value val_mul(const Value& a, const Value& b, const ParseContext& ctx) {
    if (!a.is_tate && !b.is_tate) return {false, a.w * b.w, {}};
    return {true, {}, promote(a, ctx) * promote(b, ctx)};
}

Value val_neg(const Value& a) {
    Value r = a;
    if (a.is_tate)
        r.t = -a.t;
    else
        r.w = -a.w;
    return r;
}

Value val_pow(const Value& a, long long e, const ParseContext& ctx, size_t pos) {
    if (e < 0) {
        if (a.is_tate) syntax_error("negative powers of Tate terms are not supported", pos);
        // Monomial pi^n [c] inverts exactly.
        if (a.w.coeffs().size() != 1 || a.w.tail())
            syntax_error("negative power of a non-monomial", pos);
        long long n = a.w.coeffs().begin()->first;
        const HahnSeries& c = a.w.coeffs().begin()->second;
        WittSeries inv = WittSeries::teichmuller(c.inverse(ctx.work_prec)).shift(-n);
        Value base{false, inv, {}};
        return val_pow(base, -e, ctx, pos);
    }
    Value acc{a.is_tate, a.is_tate ? WittSeries() : WittSeries::one(ctx.field), {}};
    if (a.is_tate) {
        MultiIndex zero(ctx.weights.size(), 0);
        acc.t = TateSeries::monomial(ctx.weights, ctx.base_r, WittSeries::one(ctx.field), zero);
    }
    Value base = a;
    while (e > 0) {
        if (e & 1) acc = val_mul(acc, base, ctx);
        if (e >>= 1) base = val_mul(base, base, ctx);
    }
    return acc;
}

Value parse_expr(Lexer& lex, const ParseContext& ctx);

Value parse_primary(Lexer& lex, const ParseContext& ctx) {
    const Token& t = lex.peek();
    if (t.kind == Token::Int) {
        Token tok = lex.take();
        uint16_t c = ctx.field->from_int(to_ll(tok.text, tok.pos));
        return {false, WittSeries::teichmuller(HahnSeries::constant(ctx.field, c)), {}};
    }
    if (t.kind == Token::LBracket) {
        lex.take();
        HahnSeries h = parse_hahn_expr(lex, ctx);
        lex.expect(Token::RBracket, "]");
        return {false, WittSeries::teichmuller(h), {}};
    }
    if (t.kind == Token::LParen) {
        lex.take();
        Value v = parse_expr(lex, ctx);
        lex.expect(Token::RParen, ")");
        return v;
    }
    if (t.kind == Token::Ident) {
        if (t.text == "pi") {
            lex.take();
            return {false, WittSeries::pi_power(ctx.field, 1), {}};
        }
        if (t.text == "O") {
            lex.take();
            lex.expect(Token::LParen, "(");
            const Token& v = lex.peek();
            if (v.kind != Token::Ident || v.text != "pi")
                syntax_error("expected pi in O(...) at element level", v.pos);
            lex.take();
            Rat e(1);
            if (lex.peek().kind == Token::Caret) {
                lex.take();
                e = parse_exponent(lex);
            }
            lex.expect(Token::RParen, ")");
            if (!e.is_integer()) syntax_error("pi-precision must be an integer", v.pos);
            WittSeries w = WittSeries::from_coeffs(ctx.field, {},
                                                   WittSeries::Tail{e.num(), Rat(0)});
            return {false, w, {}};
        }
        if (t.text.size() > 1 && t.text[0] == 'T') {
            bool digits = true;
            for (size_t k = 1; k < t.text.size(); ++k)
                if (!std::isdigit((unsigned char)t.text[k])) digits = false;
            if (digits) {
                Token tok = lex.take();
                long long k = to_ll(tok.text.substr(1), tok.pos);
                if (k < 1 || (size_t)k > ctx.weights.size())
                    syntax_error("variable T" + std::to_string(k) + " outside the declared radii",
                                 tok.pos);
                MultiIndex I(ctx.weights.size(), 0);
                I[(size_t)k - 1] = 1;
                TateSeries ts =
                    TateSeries::monomial(ctx.weights, ctx.base_r, WittSeries::one(ctx.field), I);
                return {true, {}, ts};
            }
        }
        syntax_error("unexpected name '" + t.text + "'", t.pos);
    }
    syntax_error("unexpected token", t.pos);
}

Value parse_factor(Lexer& lex, const ParseContext& ctx) {
    Value base = parse_primary(lex, ctx);
    if (lex.peek().kind == Token::Caret) {
        Token caret = lex.take();
        Rat e = parse_exponent(lex);
        if (!e.is_integer()) syntax_error("element powers must be integers", caret.pos);
        base = val_pow(base, e.num(), ctx, caret.pos);
    }
    return base;
}

Value parse_term(Lexer& lex, const ParseContext& ctx) {
    Value acc = parse_factor(lex, ctx);
    while (lex.peek().kind == Token::Star) {
        lex.take();
        acc = val_mul(acc, parse_factor(lex, ctx), ctx);
    }
    return acc;
}

Value parse_expr(Lexer& lex, const ParseContext& ctx) {
    bool neg = false;
    if (lex.peek().kind == Token::Minus) {
        neg = true;
        lex.take();
    } else if (lex.peek().kind == Token::Plus) {
        lex.take();
    }
    Value acc = parse_term(lex, ctx);
    if (neg) acc = val_neg(acc);
    while (lex.peek().kind == Token::Plus || lex.peek().kind == Token::Minus) {
        bool sub = lex.take().kind == Token::Minus;
        Value term = parse_term(lex, ctx);
        acc = val_add(acc, sub ? val_neg(term) : term, ctx);
    }
    return acc;
}

} // namespace

ParsedElement parse_element(const std::string& text, const ParseContext& ctx) {
    if (!ctx.field) fail(ErrorCode::InvalidArgument, "parse context without field");
    Lexer lex(text);
    Value v = parse_expr(lex, ctx);
    if (lex.peek().kind != Token::End) syntax_error("trailing input", lex.peek().pos);
    ParsedElement out;
    if (v.is_tate)
        out.tate = v.t;
    else
        out.witt = v.w;
    return out;
}

WittSeries parse_witt(const std::string& text, const ParseContext& ctx) {
    ParsedElement e = parse_element(text, ctx);
    if (!e.witt) fail(ErrorCode::SyntaxError, "expected a plain element without T-variables");
    return *e.witt;
}

HahnSeries parse_hahn(const std::string& text, const ParseContext& ctx) {
    if (!ctx.field) fail(ErrorCode::InvalidArgument, "parse context without field");
    Lexer lex(text);
    HahnSeries h = parse_hahn_expr(lex, ctx);
    if (lex.peek().kind != Token::End) syntax_error("trailing input", lex.peek().pos);
    return h;
}

Rat parse_rat(const std::string& text) {
    size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(text));
        return Rat(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail(ErrorCode::SyntaxError, "bad rational '" + text + "'");
    }
}

ExtRat parse_extrat(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "infinity") return ExtRat::infinity();
    return ExtRat(parse_rat(text));
}

std::string element_str(const TateSeries& f) {
    if (f.no_terms()) return "0";
    std::string s;
    for (const auto& [I, c] : f.terms()) {
        std::string mono;
        for (size_t k = 0; k < I.size(); ++k) {
            if (I[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "T" + std::to_string(k + 1);
            if (I[k] > 1) mono += "^" + std::to_string(I[k]);
        }
        std::string coeff = c.str();
        std::string term;
        if (mono.empty()) {
            term = coeff;
        } else if (c == WittSeries::one(c.field())) {
            term = mono;
        } else if (coeff.find(" + ") == std::string::npos) {
            term = coeff + "*" + mono;
        } else {
            term = "(" + coeff + ")*" + mono;
        }
        s = s.empty() ? term : s + " + " + term;
    }
    return s;
}

} // namespace robba

#include "trekcalc/poly.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "trekcalc/errors.hpp"

namespace trekcalc {

std::string var_to_string(const Var& v) {
    if (v.kind == Var::Kind::edge)
        return "a[" + std::to_string(v.a) + "," + std::to_string(v.b) + "]";
    return "w[" + std::to_string(v.a) + "]";
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [v, e] : vars) {
        (void)v;
        d += e;
    }
    return d;
}

int Monomial::exponent(const Var& v) const {
    for (const auto& [w, e] : vars)
        if (w == v) return e;
    return 0;
}

bool Monomial::operator<(const Monomial& o) const {
    int da = total_degree(), db = o.total_degree();
    if (da != db) return da < db;
    std::size_t a = 0, b = 0;
    while (a < vars.size() && b < o.vars.size()) {
        if (vars[a].first < o.vars[b].first) return false;  // earlier var here => greater
        if (o.vars[b].first < vars[a].first) return true;
        if (vars[a].second != o.vars[b].second)
            return vars[a].second < o.vars[b].second;
        ++a;
        ++b;
    }
    return a == vars.size() && b < o.vars.size();
}

Monomial mono_mul(const Monomial& x, const Monomial& y) {
    Monomial out;
    out.vars.reserve(x.vars.size() + y.vars.size());
    std::size_t a = 0, b = 0;
    while (a < x.vars.size() || b < y.vars.size()) {
        if (b == y.vars.size() || (a < x.vars.size() && x.vars[a].first < y.vars[b].first)) {
            out.vars.push_back(x.vars[a++]);
        } else if (a == x.vars.size() || y.vars[b].first < x.vars[a].first) {
            out.vars.push_back(y.vars[b++]);
        } else {
            out.vars.push_back({x.vars[a].first, x.vars[a].second + y.vars[b].second});
            ++a;
            ++b;
        }
    }
    return out;
}

Poly::Poly(const Rat& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly::Poly(const Var& v) { terms_.emplace(Monomial{{{v, 1}}}, Rat(1)); }

Poly::Poly(const Monomial& m, const Rat& c) {
    if (c != 0) terms_.emplace(m, c);
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return terms_.begin()->second;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.vars.empty());
}

void Poly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    out += o;
    return out;
}

Poly Poly::operator-(const Poly& o) const {
    Poly out = *this;
    out -= o;
    return out;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    Poly out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
    return out;
}

Poly Poly::operator*(const Rat& c) const {
    Poly out;
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

Poly Poly::derivative(const Var& v) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        if (e == 0) continue;
        Monomial dm;
        for (const auto& [w, k] : m.vars) {
            if (w == v) {
                if (k > 1) dm.vars.push_back({w, k - 1});
            } else {
                dm.vars.push_back({w, k});
            }
        }
        out.add_term(dm, c * e);
    }
    return out;
}

Poly Poly::substitute(const std::map<Var, Rat>& assignment) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        Rat coeff = c;
        Monomial rest;
        bool dead = false;
        for (const auto& [v, e] : m.vars) {
            auto it = assignment.find(v);
            if (it == assignment.end()) {
                rest.vars.push_back({v, e});
                continue;
            }
            if (it->second == 0) {
                dead = true;
                break;
            }
            for (int k = 0; k < e; ++k) coeff *= it->second;
        }
        if (!dead) out.add_term(rest, coeff);
    }
    return out;
}

Rat Poly::evaluate(const std::map<Var, Rat>& assignment) const {
    Rat total(0);
    for (const auto& [m, c] : terms_) {
        Rat term = c;
        for (const auto& [v, e] : m.vars) {
            auto it = assignment.find(v);
            if (it == assignment.end())
                throw std::invalid_argument("unassigned variable: " + var_to_string(v));
            for (int k = 0; k < e; ++k) term *= it->second;
        }
        total += term;
    }
    return total;
}

Poly Poly::coefficient_of_linear(const Var& v) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        if (e == 0) continue;
        if (e >= 2) throw std::invalid_argument("degree-too-high: " + var_to_string(v));
        Monomial rest;
        for (const auto& [w, k] : m.vars)
            if (!(w == v)) rest.vars.push_back({w, k});
        out.add_term(rest, c);
    }
    return out;
}

bool Poly::uses_var(const Var& v) const {
    for (const auto& [m, c] : terms_) {
        (void)c;
        if (m.exponent(v) > 0) return true;
    }
    return false;
}

int Poly::degree_in(const Var& v) const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        (void)c;
        d = std::max(d, m.exponent(v));
    }
    return d;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        (void)c;
        d = std::max(d, m.total_degree());
    }
    return d;
}

std::vector<Var> Poly::variables() const {
    std::vector<Var> out;
    for (const auto& [m, c] : terms_) {
        (void)c;
        for (const auto& [v, e] : m.vars) {
            (void)e;
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Poly exact_divide(const Poly& p, const Poly& d) {
    if (d.is_zero()) throw std::logic_error("division by zero polynomial");
    Poly rem = p, quot;
    const auto& dlead = *d.terms().rbegin();  // grlex-largest term of d
    while (!rem.is_zero()) {
        const auto& rlead = *rem.terms().rbegin();
        // Divide leading monomials; every variable of dlead must fit.
        Monomial q;
        bool ok = true;
        std::size_t a = 0, b = 0;
        const auto& rv = rlead.first.vars;
        const auto& dv = dlead.first.vars;
        while (b < dv.size()) {
            if (a == rv.size() || dv[b].first < rv[a].first) {
                ok = false;
                break;
            }
            if (rv[a].first < dv[b].first) {
                q.vars.push_back(rv[a++]);
                continue;
            }
            int e = rv[a].second - dv[b].second;
            if (e < 0) {
                ok = false;
                break;
            }
            if (e > 0) q.vars.push_back({rv[a].first, e});
            ++a;
            ++b;
        }
        while (ok && a < rv.size()) q.vars.push_back(rv[a++]);
        if (!ok) throw std::logic_error("inexact polynomial division");
        Poly qt(q, rlead.second / dlead.second);
        quot += qt;
        rem -= qt * d;
    }
    return quot;
}

namespace {

std::string rat_abs_to_string(const Rat& r) { return rat_to_string(abs(r)); }

std::string mono_to_text(const Monomial& m) {
    std::string out;
    for (const auto& [v, e] : m.vars) {
        if (!out.empty()) out += "*";
        out += var_to_string(v);
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

}  // namespace

std::string poly_to_text(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (first) {
            if (c < 0) out += "- ";
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
        }
        std::string mt = mono_to_text(m);
        if (mt.empty()) {
            out += rat_abs_to_string(c);
        } else if (abs(c) == 1) {
            out += mt;
        } else {
            out += rat_abs_to_string(c) + "*" + mt;
        }
    }
    return out;
}

namespace {

struct PolyParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit PolyParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    int parse_int() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw ParseError("expected integer in polynomial at offset " +
                                           std::to_string(pos));
        return std::stoi(text.substr(start, pos - start));
    }

    Rat parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
                text[pos] == '.'))
            ++pos;
        if (pos == start)
            throw ParseError("expected number in polynomial at offset " + std::to_string(pos));
        return parse_rational(text.substr(start, pos - start));
    }

    Var parse_var() {
        skip_ws();
        char tag = text[pos++];
        if (!eat('[')) throw ParseError("expected '[' in polynomial variable");
        int first = parse_int();
        if (tag == 'a') {
            if (!eat(',')) throw ParseError("expected ',' in edge variable");
            int second = parse_int();
            if (!eat(']')) throw ParseError("expected ']' in edge variable");
            return Var::edge(first, second);
        }
        if (!eat(']')) throw ParseError("expected ']' in omega variable");
        return Var::omega(first);
    }

    // term := [number] ('*'? var ('^' int)?)*   with at least one factor
    Poly parse_term() {
        Rat coeff(1);
        Monomial mono;
        bool saw_factor = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = parse_number();
            saw_factor = true;
        }
        for (;;) {
            skip_ws();
            bool star = eat('*');
            char c = peek();
            if (c != 'a' && c != 'w') {
                if (star) throw ParseError("dangling '*' in polynomial");
                break;
            }
            Var v = parse_var();
            int e = 1;
            if (eat('^')) e = parse_int();
            bool merged = false;
            for (auto& [w, k] : mono.vars) {
                if (w == v) {
                    k += e;
                    merged = true;
                    break;
                }
            }
            if (!merged) mono.vars.push_back({v, e});
            saw_factor = true;
        }
        if (!saw_factor) throw ParseError("empty term in polynomial");
        std::sort(mono.vars.begin(), mono.vars.end());
        return Poly(mono, coeff);
    }

    Poly parse() {
        Poly out;
        int sign = 1;
        if (eat('-')) sign = -1;
        else eat('+');
        out += parse_term() * Rat(sign);
        for (;;) {
            skip_ws();
            if (pos >= text.size()) break;
            if (eat('+')) sign = 1;
            else if (eat('-')) sign = -1;
            else throw ParseError("expected '+' or '-' in polynomial at offset " +
                                  std::to_string(pos));
            out += parse_term() * Rat(sign);
        }
        return out;
    }
};

}  // namespace

Poly parse_poly(const std::string& text) {
    PolyParser p(text);
    p.skip_ws();
    if (p.pos >= text.size()) throw ParseError("empty polynomial");
    return p.parse();
}

}  // namespace trekcalc

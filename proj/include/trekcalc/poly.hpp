#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trekcalc/rational.hpp"

namespace trekcalc {

// Whether the error-covariance matrix is specialized to the identity or kept
// as symbolic w[m] variables.
enum class OmegaMode { identity, symbolic };

// a[i,j] (edge weight) or w[m] (error variance).  Canonical order: all edge
// variables lexicographically by (i,j), then omega variables by m.
struct Var {
    enum class Kind : std::uint8_t { edge, omega };
    Kind kind = Kind::edge;
    int a = 0;  // edge tail, or omega vertex
    int b = 0;  // edge head; 0 for omega

    static Var edge(int i, int j) { return {Kind::edge, i, j}; }
    static Var omega(int m) { return {Kind::omega, m, 0}; }
    friend auto operator<=>(const Var&, const Var&) = default;
};

std::string var_to_string(const Var& v);

// Sparse exponent vector; vars sorted by canonical order, exponents >= 1.
struct Monomial {
    std::vector<std::pair<Var, int>> vars;

    int total_degree() const;
    int exponent(const Var& v) const;
    bool operator==(const Monomial& o) const { return vars == o.vars; }
    // Graded lexicographic: lower total degree first; ties broken so that a
    // higher exponent on an earlier variable sorts later (lex-greater).
    bool operator<(const Monomial& o) const;
};

Monomial mono_mul(const Monomial& x, const Monomial& y);

// Immutable sparse polynomial over Rat.  No zero coefficients stored.
class Poly {
   public:
    Poly() = default;
    explicit Poly(const Rat& c);
    explicit Poly(const Var& v);
    Poly(const Monomial& m, const Rat& c);

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(Rat(1)); }

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rat>& terms() const { return terms_; }

    // The value when the polynomial is a constant; requires degree 0.
    Rat constant_value() const;
    bool is_constant() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator*(const Rat& c) const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    Poly derivative(const Var& v) const;
    // Partial substitution: unassigned variables stay symbolic.
    Poly substitute(const std::map<Var, Rat>& assignment) const;
    // Full evaluation; throws if any variable is unassigned.
    Rat evaluate(const std::map<Var, Rat>& assignment) const;
    // p = c*v + (terms free of v); throws degree-too-high when deg_v(p) >= 2.
    Poly coefficient_of_linear(const Var& v) const;
    bool uses_var(const Var& v) const;
    int degree_in(const Var& v) const;
    int total_degree() const;
    std::vector<Var> variables() const;

   private:
    void add_term(const Monomial& m, const Rat& c);
    std::map<Monomial, Rat> terms_;
};

// Exact quotient; throws std::logic_error when d does not divide p exactly.
Poly exact_divide(const Poly& p, const Poly& d);

// Canonical text form: terms ascending in the monomial order, joined by
// " + " / " - "; "0" for zero; unit coefficients omitted next to variables.
std::string poly_to_text(const Poly& p);

// Inverse of poly_to_text (accepts any sum of `c*a[i,j]^e*w[m]^e` terms).
Poly parse_poly(const std::string& text);

}  // namespace trekcalc

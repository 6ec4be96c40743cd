#include "trekcalc/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "trekcalc/errors.hpp"

namespace trekcalc {

Rat parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    // Reject whitespace and other junk up front: mpq's own parser is lenient.
    std::size_t slash = std::string::npos, dot = std::string::npos;
    for (std::size_t k = 0; k < text.size(); ++k) {
        char c = text[k];
        if (c == '/') {
            if (slash != std::string::npos || dot != std::string::npos)
                throw ParseError("bad rational literal: " + text);
            slash = k;
        } else if (c == '.') {
            if (dot != std::string::npos || slash != std::string::npos)
                throw ParseError("bad rational literal: " + text);
            dot = k;
        } else if (c == '-' || c == '+') {
            if (k != 0 && !(slash != std::string::npos && k == slash + 1))
                throw ParseError("bad rational literal: " + text);
        } else if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("bad rational literal: " + text);
        }
    }
    auto digits_in = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            if (std::isdigit(static_cast<unsigned char>(text[k]))) return true;
        return false;
    };
    if (!digits_in(0, text.size())) throw ParseError("bad rational literal: " + text);

    try {
        if (dot != std::string::npos) {
            // d1.d2 -> (d1d2) / 10^len(d2), exactly.
            std::string head = text.substr(0, dot);
            std::string frac = text.substr(dot + 1);
            if (!digits_in(dot + 1, text.size()))
                throw ParseError("bad rational literal: " + text);
            bool neg = !head.empty() && head[0] == '-';
            if (!head.empty() && (head[0] == '-' || head[0] == '+')) head = head.substr(1);
            mpz_class num(head.empty() ? std::string("0") : head, 10);
            for (char c : frac) {
                num *= 10;
                num += c - '0';
            }
            mpz_class den(1);
            for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
            Rat r(num, den);
            r.canonicalize();
            if (neg) r = -r;
            return r;
        }
        if (slash != std::string::npos) {
            if (!digits_in(0, slash) || !digits_in(slash + 1, text.size()))
                throw ParseError("bad rational literal: " + text);
        }
        Rat r(text);
        if (r.get_den() == 0) throw ParseError("zero denominator: " + text);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + text);
    }
}

std::string rat_to_string(const Rat& r) {
    Rat c = r;  // direct (num, den) construction need not be reduced
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

int rat_sign(const Rat& r) { return sgn(r); }

bool is_pm_power_of_two(const Rat& r) {
    if (r == 0) return false;
    if (r.get_den() != 1) return false;
    mpz_class n = abs(r.get_num());
    return mpz_popcount(n.get_mpz_t()) == 1;
}

std::optional<Rat> exact_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    const mpz_class& num = r.get_num();
    const mpz_class& den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    Rat out(sn, sd);
    out.canonicalize();
    return out;
}

double rat_to_double(const Rat& r) { return r.get_d(); }

}  // namespace trekcalc

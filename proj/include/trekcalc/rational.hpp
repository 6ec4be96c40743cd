#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace trekcalc {

using Rat = mpq_class;

// Accepts "p/q", plain integers, and decimal literals ("0.25" -> 1/4).
// Throws ParseError on anything else (including q == 0).
Rat parse_rational(const std::string& text);

// Canonical form: reduced, "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

int rat_sign(const Rat& r);

// True iff r == +/- 2^k for some integer k >= 0.
bool is_pm_power_of_two(const Rat& r);

// Exact square root when r is a perfect square of a rational, else nullopt.
// Requires r >= 0.
std::optional<Rat> exact_sqrt(const Rat& r);

double rat_to_double(const Rat& r);

}  // namespace trekcalc

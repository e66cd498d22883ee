#pragma once

#include <gmpxx.h>

#include <string>

namespace loopsig {

using Integer = mpz_class;
using Rational = mpq_class;

// Base-10 "p/q" form; plain "p" when the denominator is 1.
std::string rational_to_string(const Rational& r);

// Accepts "p", "p/q", optional leading '-'. Throws std::invalid_argument on
// anything else (including a zero denominator).
Rational rational_from_string(const std::string& s);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline bool is_even_integer(const Rational& r) {
    return is_integer(r) && mpz_even_p(r.get_num().get_mpz_t());
}

}  // namespace loopsig

#pragma once

#include <gmpxx.h>

#include <string>

#include "affinefocus/errors.hpp"

namespace af {

// All geometry is exact. Q is an arbitrary-precision rational, Z an
// arbitrary-precision integer; both are always kept in canonical form.
using Q = mpq_class;
using Z = mpz_class;

inline int sgn(const Q& x) { return sgn(x.get_num()); }

inline Q abs_q(const Q& x) { return x < 0 ? Q(-x) : x; }

// Serialized form: "n" for integers, "n/d" otherwise, canonical and
// sign-on-numerator, so emit(parse(s)) == s for canonical inputs.
std::string to_string(const Q& x);

// Accepts optional leading '-', digits, optional "/digits". Rejects
// everything else, including zero denominators.
Q parse_q(const std::string& s);

// Number of bits needed for numerator and denominator, used to monitor
// coordinate growth along traces.
inline size_t bit_size(const Q& x) {
  return mpz_sizeinbase(x.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(x.get_den().get_mpz_t(), 2);
}

}  // namespace af

#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace wicklab {

// Exact rational scalar used throughout the exact layers.
using Q = mpq_class;

// Parses "p", "p/q" or a finite decimal such as "-0.375" into an exact rational.
Q parse_q(const std::string& text);

// Canonical "p/q" (or "p" for integers) rendering.
std::string to_string(const Q& q);

std::vector<std::string> to_strings(const std::vector<Q>& values);

Q factorial(unsigned n);
Q binomial(long n, long k);

// Generalized binomial C(x, k) for rational x.
Q binomial_q(const Q& x, unsigned k);

Q pow_q(const Q& base, unsigned e);

// Returns true and sets root when q is the square of a nonnegative rational.
bool rational_sqrt(const Q& q, Q& root);

bool is_integer(const Q& q);

}  // namespace wicklab

#pragma once

// Reference Wick polynomial tables, transcribed
// coefficient by coefficient (c_0 first). Shared by unit and acceptance tests.

#include "wicklab/poly.hpp"

#include <vector>

namespace golden {

using wicklab::Poly;
using wicklab::Q;

inline std::vector<Poly> hermite() {
    return {Poly({1}),         Poly({0, 1}),          Poly({-1, 0, 1}),
            Poly({0, -3, 0, 1}), Poly({3, 0, -6, 0, 1}), Poly({0, 15, 0, -10, 0, 1})};
}

// Printed E_n^lambda. The printed E_2 reads x^2 - 2/lambda, which is not centered;
// printed_e2_as_written exposes that literal form separately.
inline std::vector<Poly> exponential(const Q& l) {
    return {Poly({1}),
            Poly({-1 / l, 1}),
            Poly({0, -2 / l, 1}),
            Poly({0, 0, -3 / l, 1}),
            Poly({0, 0, 0, -4 / l, 1}),
            Poly({0, 0, 0, 0, -5 / l, 1})};
}

inline Poly printed_e2_as_written(const Q& l) { return Poly({-2 / l, 0, 1}); }

// Printed Gamma_n^{ab} through n = 5.
inline std::vector<Poly> gamma(const Q& a, const Q& b) {
    const Q r1 = a / b;
    const Q r2 = a * (a - 1) / (b * b);
    const Q r3 = a * (a - 1) * (a - 2) / (b * b * b);
    const Q r4 = a * (a - 1) * (a - 2) * (a - 3) / (b * b * b * b);
    const Q r5 = a * (a - 1) * (a - 2) * (a - 3) * (a - 4) / (b * b * b * b * b);
    return {Poly({1}),
            Poly({-r1, 1}),
            Poly({r2, -2 * r1, 1}),
            Poly({-r3, 3 * r2, -3 * r1, 1}),
            Poly({r4, -4 * r3, 6 * r2, -4 * r1, 1}),
            Poly({-r5, 5 * r4, -10 * r3, 10 * r2, -5 * r1, 1})};
}

inline std::vector<Poly> gamma_half_half() {
    return {Poly({1}),
            Poly({-1, 1}),
            Poly({-1, -2, 1}),
            Poly({-3, -3, -3, 1}),
            Poly({-15, -12, -6, -4, 1}),
            Poly({-105, -75, -30, -10, -5, 1})};
}

// Printed P_n^a including the term "-a^3 + 3a - a" as it appears in the table.
inline std::vector<Poly> poisson_printed(const Q& a) {
    const Q a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
    const Q t2 = a2 - a;
    const Q t3 = -a3 + 3 * a - a;
    const Q t4 = a4 - 6 * a3 + 7 * a2 - a;
    const Q t5 = -a5 + 10 * a4 - 25 * a3 + 15 * a2 - a;
    return {Poly({1}),
            Poly({-a, 1}),
            Poly({t2, -2 * a, 1}),
            Poly({t3, 3 * t2, -3 * a, 1}),
            Poly({t4, 4 * t3, 6 * t2, -4 * a, 1}),
            Poly({t5, 5 * t4, 10 * t3, 10 * t2, -5 * a, 1})};
}

}  // namespace golden

#pragma once

#include "wicklab/rational.hpp"

#include <cstddef>
#include <vector>

namespace wicklab {

using QMatrix = std::vector<std::vector<Q>>;

QMatrix zero_matrix(std::size_t rows, std::size_t cols);
QMatrix transpose(const QMatrix& a);
QMatrix multiply(const QMatrix& a, const QMatrix& b);
std::vector<Q> multiply(const QMatrix& a, const std::vector<Q>& v);
Q trace(const QMatrix& a);
// Sum of squared entries.
Q frobenius_sq(const QMatrix& a);

// Rank via fraction-free (Bareiss) elimination after clearing denominators row by row.
std::size_t rank(const QMatrix& a);

// Exact positive semidefiniteness test for a symmetric matrix.
bool is_psd(const QMatrix& a);

}  // namespace wicklab

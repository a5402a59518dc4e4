#include "wicklab/linalg.hpp"

#include <stdexcept>

namespace wicklab {

QMatrix zero_matrix(std::size_t rows, std::size_t cols) {
    return QMatrix(rows, std::vector<Q>(cols, Q(0)));
}

QMatrix transpose(const QMatrix& a) {
    if (a.empty()) return {};
    QMatrix t = zero_matrix(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
    if (a.empty() || b.empty()) return {};
    if (a[0].size() != b.size()) throw std::invalid_argument("matrix shape mismatch");
    QMatrix c = zero_matrix(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

std::vector<Q> multiply(const QMatrix& a, const std::vector<Q>& v) {
    std::vector<Q> r(a.size(), Q(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    }
    return r;
}

Q trace(const QMatrix& a) {
    Q t = 0;
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

Q frobenius_sq(const QMatrix& a) {
    Q s = 0;
    for (const auto& row : a)
        for (const auto& x : row) s += x * x;
    return s;
}

std::size_t rank(const QMatrix& a) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    // Clear denominators row by row so elimination runs over the integers.
    std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (const auto& x : a[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = a[i][j].get_num() * (l / a[i][j].get_den());
    }
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

bool is_psd(const QMatrix& a) {
    QMatrix m = a;
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] < 0) return false;
        if (m[k][k] == 0) {
            // A zero pivot of a PSD matrix forces a zero row.
            for (std::size_t j = k + 1; j < n; ++j)
                if (m[k][j] != 0) return false;
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Q f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return true;
}

}  // namespace wicklab

#include "wicklab/rational.hpp"

#include <regex>
#include <stdexcept>

namespace wicklab {

Q parse_q(const std::string& text) {
    static const std::regex frac(R"(^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$)");
    static const std::regex dec(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, frac)) {
        mpz_class num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str(), 10);
        mpz_class den(m[2].matched ? m[2].str() : std::string("1"), 10);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        Q q(num, den);
        q.canonicalize();
        return q;
    }
    if (std::regex_match(text, m, dec)) {
        std::string digits = m[2].str() + m[3].str();
        mpz_class num(digits.empty() ? std::string("0") : digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, m[3].str().size());
        Q q(num, den);
        q.canonicalize();
        return m[1].str() == "-" ? Q(-q) : q;
    }
    throw std::invalid_argument("not a rational number: '" + text + "'");
}

std::string to_string(const Q& q) { return q.get_str(); }

std::vector<std::string> to_strings(const std::vector<Q>& values) {
    std::vector<std::string> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

Q factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Q(f);
}

Q binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Q(b);
}

Q binomial_q(const Q& x, unsigned k) {
    Q r = 1;
    for (unsigned i = 0; i < k; ++i) r *= (x - i) / Q(i + 1);
    return r;
}

Q pow_q(const Q& base, unsigned e) {
    Q r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    r.canonicalize();
    return r;
}

bool rational_sqrt(const Q& q, Q& root) {
    if (q < 0) return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return false;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    root = Q(n, d);
    root.canonicalize();
    return true;
}

bool is_integer(const Q& q) { return q.get_den() == 1; }

}  // namespace wicklab

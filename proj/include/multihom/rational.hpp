#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "multihom/errors.hpp"

namespace multihom {

// All arithmetic in this library is exact. Rationals are GMP mpq_class
// values, which stay canonical (lowest terms, positive denominator) under
// the arithmetic operators.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw Error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Least c > 0 such that c*q is an integer for every q.
inline Integer denominator_lcm(const std::vector<Rational>& qs) {
    Integer d = 1;
    for (const auto& q : qs) d = lcm(d, q.get_den());
    return d;
}

// gcd of the absolute values; 0 for an all-zero vector.
inline Integer content(const std::vector<Integer>& v) {
    Integer g = 0;
    for (const auto& x : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw Error("integer out of machine range: " + z.get_str());
    return z.get_si();
}

// --- integer factorization helpers (rational root search) ---------------
//
// Trial division plus Pollard rho, with GMP primality testing. Only used
// to enumerate divisors of characteristic-polynomial constant terms.

namespace detail {

inline Integer pollard_rho(const Integer& n) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xC0FFEEul);
    while (true) {
        Integer x = rng.get_z_range(n - 2) + 2, y = x, c = rng.get_z_range(n - 1) + 1;
        Integer d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Integer diff = x - y;
            if (diff < 0) diff = -diff;
            if (diff == 0) break;
            d = gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_into(Integer n, std::vector<std::pair<Integer, int>>& out) {
    if (n <= 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
        for (auto& [p, e] : out)
            if (p == n) {
                ++e;
                return;
            }
        out.emplace_back(n, 1);
        return;
    }
    Integer d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

inline std::vector<std::pair<Integer, int>> factor(Integer n) {
    std::vector<std::pair<Integer, int>> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (n % p == 0) {
            n /= p;
            if (!out.empty() && out.back().first == p)
                ++out.back().second;
            else
                out.emplace_back(p, 1);
        }
    }
    long q = 17;
    while (n > 1 && Integer(q) * q <= n && q < (1L << 20)) {
        while (n % q == 0) {
            n /= q;
            if (!out.empty() && out.back().first == q)
                ++out.back().second;
            else
                out.emplace_back(q, 1);
        }
        q += 2;
    }
    if (n > 1) detail::factor_into(n, out);
    return out;
}

// All positive divisors of |n| not exceeding `bound` (no bound if <= 0).
inline std::vector<Integer> divisors_up_to(const Integer& n, const Integer& bound) {
    std::vector<Integer> divs{1};
    for (const auto& [p, e] : factor(n)) {
        size_t sz = divs.size();
        Integer pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) {
                Integer d = divs[i] * pk;
                if (bound <= 0 || d <= bound) divs.push_back(d);
            }
        }
    }
    return divs;
}

}  // namespace multihom

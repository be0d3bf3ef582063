#pragma once

// Prime sieving, Legendre symbols, and p-adic square roots (Tonelli-Shanks
// plus Hensel lifting, with the separate 2-adic lift).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tamlab/int_util.hpp"

namespace tamlab {

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    if (n < 2) return ps;
    std::vector<bool> comp(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        ps.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
    }
    return ps;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// Legendre symbol (a|p) for odd prime p, via Euler's criterion.
inline int legendre(const Int& a, const Int& p) {
    Int r = powmod(mod_reduce(a, p), (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

// Square root mod an odd prime (Tonelli-Shanks).  Requires (a|p) != -1.
inline Int sqrt_mod_p(const Int& a0, const Int& p) {
    Int a = mod_reduce(a0, p);
    if (a == 0) return 0;
    if (legendre(a, p) != 1) throw std::domain_error("sqrt_mod_p: non-residue");
    if (mod_reduce(p, 4) == 3) return powmod(a, (p + 1) / 4, p);

    // write p-1 = q * 2^s with q odd
    Int q = p - 1;
    unsigned s = 0;
    while (mod_reduce(q, 2) == 0) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (legendre(z, p) != -1) ++z;
    Int m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        Int t2 = t;
        unsigned i = 0;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

// Lift x with x^2 = a (mod p^k) to x' with x'^2 = a (mod p^n), p odd.
inline Int hensel_sqrt(const Int& a, const Int& p, std::uint64_t n) {
    Int x = sqrt_mod_p(a, p);
    if (x == 0) throw std::domain_error("hensel_sqrt: root not a unit");
    std::uint64_t k = 1;
    Int mod = p;
    while (k < n) {
        k = std::min(2 * k, n);
        mod = pow_int(p, k);
        // Newton step x -> x - (x^2-a)/(2x)
        Int inv = invmod(2 * x, mod);
        x = mod_reduce(x - (x * x - a) * inv, mod);
    }
    return x;
}

// Square root of a unit a = 1 (mod 8) in Z_2, computed mod 2^n (n >= 3).
// The result is one of the four roots mod 2^n; it is determined mod 2^(n-1)
// once its residue mod 4 is fixed.
inline Int sqrt_2adic(const Int& a, std::uint64_t n) {
    if (mod_reduce(a, 8) != 1) throw std::domain_error("sqrt_2adic: argument not 1 mod 8");
    Int x = 1;
    for (std::uint64_t k = 3; k < n; ++k) {
        Int mod2 = pow_int(2, k + 1);
        if (mod_reduce(x * x - a, mod2) != 0) x += pow_int(2, k - 1);
    }
    return mod_reduce(x, pow_int(2, n));
}

}  // namespace tamlab

#pragma once

// Arbitrary-precision integer and rational helpers shared by every module.
// All exact arithmetic is done with GMP; nothing here rounds.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tamlab {

using Int = mpz_class;
using Rat = mpq_class;

// p-adic valuation value, with v_p(0) = +infinity.
struct PadicVal {
    bool finite = true;
    std::uint64_t v = 0;

    static PadicVal infinity() { return {false, 0}; }

    bool is_infinite() const { return !finite; }
    bool at_least(std::uint64_t k) const { return !finite || v >= k; }
    bool equals(std::uint64_t k) const { return finite && v == k; }

    friend bool operator==(const PadicVal& a, const PadicVal& b) {
        return a.finite == b.finite && (!a.finite || a.v == b.v);
    }
};

inline PadicVal valuation(const Int& n, const Int& p) {
    if (n == 0) return PadicVal::infinity();
    Int m = abs(n);
    std::uint64_t e = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++e;
    }
    return {true, e};
}

// n / p^v_p(n); n must be nonzero.
inline Int unit_part(const Int& n, const Int& p) {
    if (n == 0) throw std::invalid_argument("unit_part of 0");
    Int m = n, q, r;
    for (;;) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) return m;
        m = q;
    }
}

inline Int pow_int(const Int& base, std::uint64_t e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// Residue in [0, m).
inline Int mod_reduce(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int powmod(const Int& b, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int invmod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("invmod: not invertible");
    return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_pow(const Rat& x, std::uint64_t e) {
    Rat r = 1;
    Rat b = x;
    std::uint64_t k = e;
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

inline std::uint64_t to_u64(const Int& n) {
    if (n < 0 || !n.fits_ulong_p())
        throw std::overflow_error("value does not fit in 64 bits: " + n.get_str());
    return mpz_get_ui(n.get_mpz_t());
}

}  // namespace tamlab

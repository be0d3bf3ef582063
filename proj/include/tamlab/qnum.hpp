#pragma once

// Minimal 128-bit float helpers: exact rationals stay exact until the final
// numeric rendering, which happens at quad precision so that four published
// decimals are never in doubt.

#include <quadmath.h>

#include <string>

#include "tamlab/int_util.hpp"

namespace tamlab {

using qreal = __float128;

inline qreal to_qreal(const Int& z) {
    if (z == 0) return 0;
    std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (bits <= 62) return static_cast<qreal>(mpz_get_si(z.get_mpz_t()));
    // take the top <= 112 bits and rescale
    long shift = bits > 112 ? static_cast<long>(bits) - 112 : 0;
    Int rest = abs(z) >> static_cast<unsigned long>(shift);
    qreal r = 0;
    qreal scale = 1;
    while (rest != 0) {
        Int limb = mod_reduce(rest, Int(1) << 32);
        r += scale * static_cast<qreal>(mpz_get_ui(limb.get_mpz_t()));
        scale *= 4294967296.0Q;
        rest >>= 32;
    }
    r = ldexpq(r, static_cast<int>(shift));
    return z < 0 ? -r : r;
}

inline qreal to_qreal(const Rat& q) {
    return to_qreal(q.get_num()) / to_qreal(q.get_den());
}

inline double qd(qreal x) { return static_cast<double>(x); }

inline std::string qreal_to_string(qreal x, int digits = 30) {
    char buf[128];
    std::string fmt = "%." + std::to_string(digits) + "Qg";
    quadmath_snprintf(buf, sizeof buf, fmt.c_str(), x);
    return buf;
}

}  // namespace tamlab

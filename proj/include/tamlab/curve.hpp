#pragma once

// Short and long Weierstrass models over Z, the height ordering, and
// height-bounded enumeration.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tamlab/int_util.hpp"

namespace tamlab {

// y^2 = x^3 + a4 x + a6 with nonzero discriminant.  Singular pairs are
// rejected here so downstream code can assume Delta != 0.
class Curve {
  public:
    Curve(Int a4, Int a6) : a4_(std::move(a4)), a6_(std::move(a6)) {
        if (4 * a4_ * a4_ * a4_ + 27 * a6_ * a6_ == 0)
            throw std::invalid_argument("singular curve: 4*a4^3 + 27*a6^2 = 0");
    }

    const Int& a4() const { return a4_; }
    const Int& a6() const { return a6_; }

    // -16(4 a4^3 + 27 a6^2)
    Int discriminant() const { return -16 * (4 * a4_ * a4_ * a4_ + 27 * a6_ * a6_); }

    // max{4|a4|^3, 27 a6^2}
    Int height() const {
        Int h4 = 4 * abs(a4_) * a4_ * a4_;
        Int h6 = 27 * a6_ * a6_;
        return h4 > h6 ? h4 : h6;
    }

    friend bool operator==(const Curve& a, const Curve& b) {
        return a.a4_ == b.a4_ && a.a6_ == b.a6_;
    }

  private:
    Int a4_, a6_;
};

// General Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct LongModel {
    Int a1, a2, a3, a4, a6;

    Int b2() const { return a1 * a1 + 4 * a2; }
    Int b4() const { return 2 * a4 + a1 * a3; }
    Int b6() const { return a3 * a3 + 4 * a6; }
    Int b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    Int c4() const { return b2() * b2() - 24 * b4(); }

    Int discriminant() const {
        Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }

    // Change of variable x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
    // Divides the discriminant by u^12; all divisions must be exact.
    LongModel transformed(const Int& u, const Int& r, const Int& s, const Int& t) const {
        auto exact_div = [](const Int& num, const Int& den) {
            Int q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            if (rem != 0) throw std::logic_error("transformed: non-integral model");
            return q;
        };
        Int u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
        LongModel m;
        m.a1 = exact_div(a1 + 2 * s, u);
        m.a2 = exact_div(a2 - s * a1 + 3 * r - s * s, u2);
        m.a3 = exact_div(a3 + r * a1 + 2 * t, u3);
        m.a4 = exact_div(a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t, u4);
        m.a6 = exact_div(a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1, u6);
        return m;
    }
};

inline LongModel to_long_model(const Curve& c) { return LongModel{0, 0, 0, c.a4(), c.a6()}; }

struct HeightBound {
    Int X;

    explicit HeightBound(Int x) : X(std::move(x)) {
        if (X < 0) throw std::invalid_argument("height bound must be nonnegative");
    }

    // Largest |a4| with 4|a4|^3 <= X, and largest |a6| with 27 a6^2 <= X.
    Int a4_limit() const {
        Int lo = 0, hi = 1;
        while (4 * hi * hi * hi <= X) hi *= 2;
        while (lo < hi) {
            Int mid = (lo + hi + 1) / 2;
            if (4 * mid * mid * mid <= X) lo = mid; else hi = mid - 1;
        }
        return lo;
    }
    Int a6_limit() const { return isqrt(X / 27); }

    bool contains(const Curve& c) const { return c.height() <= X; }
};

// Visit every curve with ht <= X and a4 in [a4_lo, a4_hi], in lexicographic
// order by (a4, a6).  Lexicographic order makes sharding by a4-intervals
// recombine deterministically.
inline void for_each_curve_in_range(const HeightBound& bound, const Int& a4_lo,
                                    const Int& a4_hi,
                                    const std::function<void(const Curve&)>& fn) {
    Int b6 = bound.a6_limit();
    for (Int a4 = a4_lo; a4 <= a4_hi; ++a4) {
        Int cube4 = 4 * abs(a4) * a4 * a4;
        if (cube4 > bound.X) continue;
        for (Int a6 = -b6; a6 <= b6; ++a6) {
            if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;
            fn(Curve(a4, a6));
        }
    }
}

inline void for_each_curve(const HeightBound& bound,
                           const std::function<void(const Curve&)>& fn) {
    Int lim = bound.a4_limit();
    for_each_curve_in_range(bound, -lim, lim, fn);
}

inline std::vector<Curve> enumerate_curves(const HeightBound& bound) {
    std::vector<Curve> out;
    for_each_curve(bound, [&](const Curve& c) { out.push_back(c); });
    return out;
}

}  // namespace tamlab

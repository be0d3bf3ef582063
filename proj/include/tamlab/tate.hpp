#pragma once

// Local reduction data of elliptic curves over Q at a prime p: Kodaira type,
// Tamagawa number c_p = [E(Q_p) : E0(Q_p)], and model minimality.
//
// Two independent routes are provided.
//
//   generic_tate  -- the textbook algorithm on general Weierstrass models
//                    (steps ordered as in Silverman, Advanced Topics IV.9),
//                    with exact integer arithmetic throughout.
//
//   classify      -- a case dispatch on the valuations (v_p(a4), v_p(a6),
//                    v_p(Delta)) of a short model, which resolves every case
//                    from congruence data of a4, a6 and a few p-adic units.
//                    At p = 2 the I_n* cases fall back to generic_tate; the
//                    short-model data does not decide them cheaply.
//
// The two must agree everywhere; the test suite enforces this.

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tamlab/curve.hpp"
#include "tamlab/int_util.hpp"
#include "tamlab/kodaira.hpp"
#include "tamlab/primes.hpp"

namespace tamlab {

struct LocalReduction {
    Int p;
    KodairaType kodaira;
    std::uint64_t cp = 1;
    bool short_minimal = true;          // the input model was p-minimal
    std::uint64_t rescalings = 0;       // (a4,a6) -> (a4/p^4, a6/p^6) passes
    std::uint64_t min_disc_valuation = 0;
};

// The per-prime invariants driving the case dispatch.  s and t are p-adic
// units represented modulo p^precision; they are only populated in the
// regimes where the dispatch needs them.
struct TateData {
    PadicVal alpha4, alpha6;
    Int A4, A6;                 // unit parts; 0 when the coefficient is 0
    std::uint64_t d = 0;        // v_p(Delta)
    bool has_st = false;
    Int s, t;
    std::uint64_t precision = 0;  // s, t are residues mod p^precision
    // p = 2 only:
    bool has_vk = false;
    Int v;
    PadicVal k;
};

namespace detail {

// ---------- small F_p[T] arithmetic (dense, low degree) ----------

using Poly = std::vector<Int>;  // coefficients, index = degree, reduced mod p

inline void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, const Int& p) {
    Poly r(a.size() + b.size(), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = mod_reduce(r[i + j] + a[i] * b[j], p);
    // reduce by monic mod
    while (r.size() >= mod.size() && !r.empty()) {
        poly_trim(r);
        if (r.size() < mod.size()) break;
        Int lead = r.back();
        std::size_t shift = r.size() - mod.size();
        for (std::size_t i = 0; i < mod.size(); ++i)
            r[shift + i] = mod_reduce(r[shift + i] - lead * mod[i], p);
    }
    poly_trim(r);
    return r;
}

inline Poly poly_gcd(Poly a, Poly b, const Int& p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // a mod b
        Int inv = invmod(b.back(), p);
        while (a.size() >= b.size() && !a.empty()) {
            Int q = mod_reduce(a.back() * inv, p);
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[shift + i] = mod_reduce(a[shift + i] - q * b[i], p);
            poly_trim(a);
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        Int inv = invmod(a.back(), p);
        for (auto& c : a) c = mod_reduce(c * inv, p);
    }
    return a;
}

// Number of roots in F_p of a monic cubic T^3 + c2 T^2 + c1 T + c0.
inline int cubic_root_count(const Int& c2, const Int& c1, const Int& c0, const Int& p) {
    if (p < 17) {
        int n = 0;
        for (Int t = 0; t < p; ++t)
            if (mod_reduce(((t + c2) * t + c1) * t + c0, p) == 0) ++n;
        return n;
    }
    Poly f = {mod_reduce(c0, p), mod_reduce(c1, p), mod_reduce(c2, p), Int(1)};
    // T^p mod f by square and multiply
    Poly x = {Int(0), Int(1)};
    Poly acc = {Int(1)};
    Int e = p;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = poly_mulmod(acc, x, f, p);
        x = poly_mulmod(x, x, f, p);
        e >>= 1;
    }
    // gcd(T^p - T, f): degree = number of distinct roots
    if (acc.size() < 2) acc.resize(2, Int(0));
    acc[1] = mod_reduce(acc[1] - 1, p);
    Poly g = poly_gcd(acc, f, p);
    return g.empty() ? 0 : static_cast<int>(g.size() - 1);
}

// Multiple root structure of the monic cubic mod p: multiplicity (1 = none,
// 2, or 3) and the repeated root when present.
struct CubicMult {
    int multiplicity = 1;
    Int root;
};

inline CubicMult cubic_multiple_root(const Int& c2, const Int& c1, const Int& c0, const Int& p) {
    if (p <= 3) {
        // deflate by (T - r) repeatedly; char-safe, unlike derivative tests
        for (Int r = 0; r < p; ++r) {
            Int q1 = mod_reduce(c2 + r, p);          // cubic / (T - r) = T^2 + q1 T + q0
            Int q0 = mod_reduce(c1 + r * q1, p);
            if (mod_reduce(c0 + r * q0, p) != 0) continue;  // not a root
            if (mod_reduce(r * r + q1 * r + q0, p) != 0) continue;  // simple root
            bool triple = mod_reduce(q1 + 2 * r, p) == 0;   // quotient / (T - r) again
            return {triple ? 3 : 2, r};
        }
        return {1, Int(0)};
    }
    // p >= 5: gcd with the derivative
    Poly f = {mod_reduce(c0, p), mod_reduce(c1, p), mod_reduce(c2, p), Int(1)};
    Poly df = {mod_reduce(c1, p), mod_reduce(2 * c2, p), Int(3)};
    Poly g = poly_gcd(f, df, p);
    if (g.size() <= 1) return {1, Int(0)};
    if (g.size() == 2) return {2, mod_reduce(-g[0], p)};  // g = T - root (monic)
    return {3, mod_reduce(-c2 * invmod(Int(3), p), p)};   // triple root = -c2/3
}

// Does a x^2 + b x + c (separable mod p) split over F_p?
inline bool quad_splits(const Int& a, const Int& b, const Int& c, const Int& p) {
    if (p == 2) {
        // a, b odd: roots exist iff c is even
        assert(mod_reduce(a, 2) == 1 && mod_reduce(b, 2) == 1);
        return mod_reduce(c, 2) == 0;
    }
    return legendre(b * b - 4 * a * c, p) == 1;
}

// Translate the model so the singular point of the reduction sits at (0,0).
inline LongModel move_singular_point(const LongModel& m, const Int& p) {
    Int r = -1, t = -1;
    if (p <= 3) {
        for (Int x = 0; x < p && r < 0; ++x) {
            for (Int y = 0; y < p; ++y) {
                Int f = y * y + m.a1 * x * y + m.a3 * y - x * x * x - m.a2 * x * x -
                        m.a4 * x - m.a6;
                Int fx = m.a1 * y - 3 * x * x - 2 * m.a2 * x - m.a4;
                Int fy = 2 * y + m.a1 * x + m.a3;
                if (mod_reduce(f, p) == 0 && mod_reduce(fx, p) == 0 && mod_reduce(fy, p) == 0) {
                    r = x;
                    t = y;
                    break;
                }
            }
        }
        if (r < 0) throw std::logic_error("singular point not found");
    } else {
        // complete the square: singular x is the multiple root of
        // x^3 + (b2/4) x^2 + (b4/2) x + b6/4 mod p
        Int i4 = invmod(Int(4), p), i2 = invmod(Int(2), p);
        auto mr = cubic_multiple_root(mod_reduce(m.b2() * i4, p), mod_reduce(m.b4() * i2, p),
                                      mod_reduce(m.b6() * i4, p), p);
        if (mr.multiplicity == 1) throw std::logic_error("singular point not found");
        r = mr.root;
        t = mod_reduce(-(m.a1 * r + m.a3) * i2, p);
    }
    return m.transformed(1, r, 0, t);
}

inline Int exact_div(const Int& n, const Int& d) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (r != 0) throw std::logic_error("exact_div: not divisible");
    return q;
}

}  // namespace detail

// Full Tate's algorithm on a general integral model, exact arithmetic.
inline LocalReduction generic_tate(LongModel m, const Int& p) {
    using namespace detail;
    if (!is_prime(p)) throw std::invalid_argument("generic_tate: p must be prime");
    if (m.discriminant() == 0) throw std::invalid_argument("generic_tate: singular model");

    LocalReduction out;
    out.p = p;
    std::uint64_t rescalings = 0;

    for (;;) {
        Int disc = m.discriminant();
        PadicVal dv = valuation(disc, p);
        std::uint64_t d = dv.v;
        if (d == 0) {
            out.kodaira = KodairaType::I0();
            out.cp = 1;
            break;
        }

        m = move_singular_point(m, p);

        if (!valuation(m.b2(), p).at_least(1)) {
            // multiplicative reduction, type I_n with n = v(Delta)
            bool split = (p == 2) ? (mod_reduce(m.a2, 2) == 0) : (legendre(m.b2(), p) == 1);
            out.kodaira = KodairaType::In(d);
            out.cp = split ? d : epsilon(d);
            break;
        }
        if (!valuation(m.a6, p).at_least(2)) {
            out.kodaira = KodairaType::II();
            out.cp = 1;
            break;
        }
        if (!valuation(m.b8(), p).at_least(3)) {
            out.kodaira = KodairaType::III();
            out.cp = 2;
            break;
        }
        if (!valuation(m.b6(), p).at_least(3)) {
            Int a3t = exact_div(m.a3, p), a6t = exact_div(m.a6, p * p);
            out.kodaira = KodairaType::IV();
            out.cp = quad_splits(Int(1), a3t, -a6t, p) ? 3 : 1;
            break;
        }

        // normalize so that p | a1, a2;  p^2 | a3, a4;  p^3 | a6
        if (p == 2) {
            m = m.transformed(1, 0, mod_reduce(m.a2, 2), 0);
            m = m.transformed(1, 0, 0, mod_reduce(m.a6, 8) == 0 ? Int(0) : Int(2));
        } else {
            m = m.transformed(1, 0, mod_reduce(-m.a1 * invmod(Int(2), p), p), 0);
            Int p2 = p * p;
            m = m.transformed(1, 0, 0, mod_reduce(-m.a3 * invmod(Int(2), p2), p2));
        }

        Int c2 = mod_reduce(exact_div(m.a2, p), p);
        Int c1 = mod_reduce(exact_div(m.a4, p * p), p);
        Int c0 = mod_reduce(exact_div(m.a6, p * p * p), p);
        auto mult = cubic_multiple_root(c2, c1, c0, p);

        if (mult.multiplicity == 1) {
            out.kodaira = KodairaType::I0star();
            out.cp = 1 + cubic_root_count(c2, c1, c0, p);
            break;
        }

        if (mult.multiplicity == 2) {
            // type I_n*, n >= 1: walk the chain of double roots
            m = m.transformed(1, p * mult.root, 0, 0);
            Int mx = p * p, my = p * p;
            std::uint64_t ix = 3, iy = 3;
            for (;;) {
                Int a3t = exact_div(m.a3, my);
                Int a6t = exact_div(m.a6, mx * my);
                if (!valuation(a3t * a3t + 4 * a6t, p).at_least(1)) {
                    out.kodaira = KodairaType::Instar(ix + iy - 5);
                    out.cp = quad_splits(Int(1), a3t, -a6t, p) ? 4 : 2;
                    break;
                }
                Int y0 = (p == 2) ? mod_reduce(a6t, 2) : mod_reduce(-a3t * invmod(Int(2), p), p);
                m = m.transformed(1, 0, 0, my * y0);
                ++iy;
                my *= p;

                Int a2t = exact_div(m.a2, p);
                Int a4t = exact_div(m.a4, p * mx);
                Int a6s = exact_div(m.a6, mx * my);
                if (!valuation(a4t * a4t - 4 * a2t * a6s, p).at_least(1)) {
                    out.kodaira = KodairaType::Instar(ix + iy - 5);
                    out.cp = quad_splits(a2t, a4t, a6s, p) ? 4 : 2;
                    break;
                }
                Int x0 = (p == 2) ? mod_reduce(a6s, 2)
                                  : mod_reduce(-a4t * invmod(2 * a2t, p), p);
                m = m.transformed(1, mx * x0, 0, 0);
                ++ix;
                mx *= p;
            }
            break;
        }

        // triple root: types IV*, III*, II*, or not minimal
        m = m.transformed(1, p * mult.root, 0, 0);
        Int p2 = p * p;
        Int a3t = exact_div(m.a3, p2);
        Int a6t = exact_div(m.a6, p2 * p2);
        if (!valuation(a3t * a3t + 4 * a6t, p).at_least(1)) {
            out.kodaira = KodairaType::IVstar();
            out.cp = quad_splits(Int(1), a3t, -a6t, p) ? 3 : 1;
            break;
        }
        Int y0 = (p == 2) ? mod_reduce(a6t, 2) : mod_reduce(-a3t * invmod(Int(2), p), p);
        m = m.transformed(1, 0, 0, p2 * y0);
        if (!valuation(m.a4, p).at_least(4)) {
            out.kodaira = KodairaType::IIIstar();
            out.cp = 2;
            break;
        }
        if (!valuation(m.a6, p).at_least(6)) {
            out.kodaira = KodairaType::IIstar();
            out.cp = 1;
            break;
        }
        m = m.transformed(p, 0, 0, 0);
        ++rescalings;
    }

    out.rescalings = rescalings;
    out.short_minimal = (rescalings == 0);
    out.min_disc_valuation = valuation(m.discriminant(), p).v;
    return out;
}

// ---------------------------------------------------------------------------
// Tate data for short models
// ---------------------------------------------------------------------------

namespace detail {

// p >= 5, or p = 3 in the regime 3*alpha4 = 2*alpha6 + 3 < d: unit t with
// a4 = -3 p^alpha4 t^2 and the sign fixed by v_p(a6 - 2 p^alpha6 t^3) = d - alpha6 - e,
// where e = 0 for p >= 5 and e = 3 for p = 3.  Returns (t mod p^prec, s mod p,
// the exact valuation drop).  For p = 3 the unit part satisfies a4 = -3^alpha4 t^2,
// i.e. t^2 = -A4.
struct UnitPair {
    Int t;   // mod p^prec
    Int s;   // mod p
};

inline UnitPair model_st(const Int& a6, const Int& A4neg_sq, const Int& p,
                         std::uint64_t alpha6, std::uint64_t target_val,
                         std::uint64_t prec) {
    // A4neg_sq is the p-adic unit whose square root is t
    Int modulus = pow_int(p, prec);
    Int t = (p == 2) ? sqrt_2adic(mod_reduce(A4neg_sq, modulus), prec)
                     : hensel_sqrt(mod_reduce(A4neg_sq, modulus), p, prec);
    Int pa6 = pow_int(p, alpha6);
    Int r = a6 - 2 * pa6 * t * t * t;
    if (!valuation(r, p).at_least(target_val)) {
        t = modulus - t;
        r = a6 - 2 * pa6 * t * t * t;
    }
    auto val = valuation(r, p);
    if (!val.equals(target_val))
        throw std::logic_error("model_st: unit normalization failed");
    return {t, mod_reduce(exact_div(r, pow_int(p, target_val)), p)};
}

}  // namespace detail

// Invariants (alpha4, alpha6, A4, A6, d) and, where the dispatch requires
// them, the unit parameters s, t (and v, k at p = 2).
inline TateData tate_data(const Curve& c, const Int& p, std::uint64_t precision = 0) {
    if (!is_prime(p)) throw std::invalid_argument("tate_data: p must be prime");
    TateData td;
    const Int& a4 = c.a4();
    const Int& a6 = c.a6();
    td.alpha4 = valuation(a4, p);
    td.alpha6 = valuation(a6, p);
    td.A4 = a4 == 0 ? Int(0) : unit_part(a4, p);
    td.A6 = a6 == 0 ? Int(0) : unit_part(a6, p);
    td.d = valuation(c.discriminant(), p).v;
    std::uint64_t prec = precision ? precision : td.d + 2;
    td.precision = prec;

    if (p >= 5) {
        // cancellation regime: v_p(4 a4^3) = v_p(27 a6^2) < d
        bool cancel = td.alpha4.finite && td.alpha6.finite &&
                      3 * td.alpha4.v == 2 * td.alpha6.v && 2 * td.alpha6.v < td.d;
        if (cancel) {
            Int u = mod_reduce(-td.A4 * invmod(Int(3), pow_int(p, prec)), pow_int(p, prec));
            auto st = detail::model_st(a6, u, p, td.alpha6.v, td.d - td.alpha6.v, prec);
            td.t = st.t;
            td.s = st.s;
            td.has_st = true;
        }
    } else if (p == 3) {
        bool cancel = td.alpha4.finite && td.alpha6.finite &&
                      3 * td.alpha4.v == 2 * td.alpha6.v + 3 && 2 * td.alpha6.v + 3 < td.d;
        if (cancel) {
            Int u = mod_reduce(-td.A4, pow_int(p, prec));
            auto st = detail::model_st(a6, u, p, td.alpha6.v, td.d - td.alpha6.v - 3, prec);
            td.t = st.t;
            td.s = st.s;
            td.has_st = true;
        }
    } else {
        // p = 2: defined when (a4, a6) = (1, 2) mod 4
        if (mod_reduce(a4, 4) == 1 && mod_reduce(a6, 4) == 2) {
            std::uint64_t n = std::max<std::uint64_t>(prec, 16);
            Int modulus = pow_int(2, n);
            bool deven = (td.d % 2 == 0);
            td.v = deven ? pow_int(2, (td.d - 6) / 2) : Int(0);
            Int u = mod_reduce((2 * td.v - a4) * invmod(Int(3), modulus), modulus);
            Int t = sqrt_2adic(u, n);
            if (mod_reduce(t, 4) != mod_reduce(detail::exact_div(a6, Int(2)), 4)) t = modulus - t;
            td.t = t;
            Int rem = a6 - (2 * t * t * t - 2 * td.v * t + td.v * td.v);
            td.k = valuation(rem, 2);
            if (td.k.finite && td.k.v + 2 >= n) td.k = PadicVal{true, n - 2};  // capped
            td.s = td.k.finite ? mod_reduce(detail::exact_div(rem, pow_int(2, td.k.v)), modulus) : Int(0);
            td.has_st = true;
            td.has_vk = true;
        }
    }
    return td;
}

// p-minimality of the short model, decided from valuations and congruences.
inline bool is_short_minimal(const Curve& c, const Int& p) {
    auto a4v = valuation(c.a4(), p), a6v = valuation(c.a6(), p);
    if (a4v.at_least(4) && a6v.at_least(6)) return false;
    if (p >= 5) return true;
    std::uint64_t d = valuation(c.discriminant(), p).v;
    if (p == 3) return !(a4v.equals(3) && a6v.equals(3) && d >= 12);
    // p = 2
    if (a4v.at_least(4) && mod_reduce(c.a6(), 64) == 16) return false;
    if (mod_reduce(c.a4(), 8) == 5 && mod_reduce(c.a6(), 8) == 6 && d >= 12) return false;
    return true;
}

namespace detail {

// p = 3 auxiliary unit s in {0, +-1} from the translated model
// y^2 = x^3 - 3^(e+1) t x^2 + (a4 + 3^(2e+1) t^2) x + 3^(3e+1) s,
// in the regime v_3(4 a4^3) >= v_3(27 a6^2) = d, alpha6 in {0, 3}, e = alpha6/3.
inline Int model2_s3(const Int& a4, const Int& a6, std::uint64_t alpha6) {
    if (alpha6 == 0) {
        Int t0 = mod_reduce(a6, 3);
        Int h = a6 - t0 * t0 * t0 - a4 * t0;
        return mod_reduce(exact_div(h, Int(3)), 3);
    }
    Int t0 = mod_reduce(exact_div(a6, Int(27)), 3);
    Int h = a6 - 27 * t0 * t0 * t0 - 3 * a4 * t0;
    return mod_reduce(exact_div(h, Int(81)), 3);
}

struct ShortState {
    Int a4, a6;
    std::uint64_t rescalings = 0;
};

// divide out (p^4, p^6) while both valuations allow it
inline ShortState strip_nonminimal_powers(const Curve& c, const Int& p) {
    ShortState st{c.a4(), c.a6(), 0};
    Int p4 = pow_int(p, 4), p6 = pow_int(p, 6);
    for (;;) {
        bool ok4 = st.a4 == 0 || mod_reduce(st.a4, p4) == 0;
        bool ok6 = st.a6 == 0 || mod_reduce(st.a6, p6) == 0;
        if (!(ok4 && ok6)) return st;
        st.a4 = st.a4 == 0 ? Int(0) : exact_div(st.a4, p4);
        st.a6 = st.a6 == 0 ? Int(0) : exact_div(st.a6, p6);
        ++st.rescalings;
    }
}

inline LocalReduction classify_ge5(const Curve& curve, const Int& p) {
    auto st = strip_nonminimal_powers(curve, p);
    Curve c(st.a4, st.a6);
    TateData td = tate_data(c, p);
    auto a4v = td.alpha4, a6v = td.alpha6;
    std::uint64_t d = td.d;

    LocalReduction out;
    out.p = p;
    out.rescalings = st.rescalings;
    out.short_minimal = (st.rescalings == 0);
    out.min_disc_valuation = d;

    if (d == 0) {
        out.kodaira = KodairaType::I0();
        out.cp = 1;
    } else if (a4v.equals(0)) {
        // multiplicative: a4 = -3t^2, a6 = 2t^3 + p^d s
        out.kodaira = KodairaType::In(d);
        Int tp = mod_reduce(td.t, p);
        out.cp = legendre(3 * tp, p) == 1 ? d : epsilon(d);
    } else if (a6v.equals(1)) {
        out.kodaira = KodairaType::II();
        out.cp = 1;
    } else if (a4v.equals(1) && a6v.at_least(2)) {
        out.kodaira = KodairaType::III();
        out.cp = 2;
    } else if (a4v.at_least(2) && a6v.equals(2)) {
        out.kodaira = KodairaType::IV();
        out.cp = 2 + legendre(td.A6, p);
    } else if (a4v.at_least(2) && a6v.at_least(3) && d == 6) {
        Int c1 = a4v.at_least(3) ? Int(0) : mod_reduce(td.A4, p);
        Int c0 = a6v.at_least(4) ? Int(0) : mod_reduce(td.A6, p);
        out.kodaira = KodairaType::I0star();
        out.cp = 1 + cubic_root_count(Int(0), c1, c0, p);
    } else if (a4v.equals(2) && a6v.equals(3) && d > 6) {
        std::uint64_t n = d - 6;
        out.kodaira = KodairaType::Instar(n);
        Int s = td.s, t = mod_reduce(td.t, p);
        if (n % 2 == 1) {
            out.cp = 3 + legendre(s, p);
        } else {
            out.cp = 3 + legendre(-s * invmod(mod_reduce(3 * t, p), p), p);
        }
    } else if (a4v.at_least(3) && a6v.equals(4)) {
        out.kodaira = KodairaType::IVstar();
        out.cp = 2 + legendre(td.A6, p);
    } else if (a4v.equals(3) && a6v.at_least(5)) {
        out.kodaira = KodairaType::IIIstar();
        out.cp = 2;
    } else if (a4v.at_least(4) && a6v.equals(5)) {
        out.kodaira = KodairaType::IIstar();
        out.cp = 1;
    } else {
        throw std::logic_error("classify_ge5: impossible valuation pattern");
    }
    return out;
}

inline LocalReduction classify_3(const Curve& curve) {
    const Int p = 3;
    auto st = strip_nonminimal_powers(curve, p);
    Curve c(st.a4, st.a6);
    TateData td = tate_data(c, p);
    auto a4v = td.alpha4, a6v = td.alpha6;
    std::uint64_t d = td.d;

    LocalReduction out;
    out.p = p;
    out.rescalings = st.rescalings;
    out.short_minimal = (st.rescalings == 0);
    out.min_disc_valuation = d;

    auto leg3 = [](const Int& a) { return mod_reduce(a, 3) == 1 ? 1 : -1; };

    if (a4v.equals(0)) {
        out.kodaira = KodairaType::I0();
        out.cp = 1;
        return out;
    }
    if (a6v.equals(1)) {
        out.kodaira = KodairaType::II();
        out.cp = 1;
        return out;
    }
    if (a4v.equals(1) && a6v.at_least(2)) {
        out.kodaira = KodairaType::III();
        out.cp = 2;
        return out;
    }
    if (a6v.equals(2)) {
        out.kodaira = KodairaType::IV();
        out.cp = 2 + leg3(td.A6);
        return out;
    }
    if (a4v.equals(2) && a6v.at_least(3)) {
        // I0*: reduced cubic is T^3 + A4 T + (a6/27 part)
        out.kodaira = KodairaType::I0star();
        if (mod_reduce(td.A4, 3) == 1) out.cp = 2;               // one root
        else if (a6v.at_least(4)) out.cp = 4;                    // three roots
        else out.cp = 1;                                         // no root
        return out;
    }
    if (a6v.equals(0)) {
        // alpha4 >= 1; d >= 3
        if (d == 3) {
            Int s = model2_s3(c.a4(), c.a6(), 0);
            out.kodaira = s != 0 ? KodairaType::II() : KodairaType::III();
            out.cp = s != 0 ? 1 : 2;
            return out;
        }
        // cancellation regime: alpha4 = 1, model1 units
        Int smod = td.s, tmod = mod_reduce(td.t, 3);
        if (d == 4) {
            out.kodaira = KodairaType::II();
            out.cp = 1;
        } else if (d == 5) {
            out.kodaira = KodairaType::IV();
            out.cp = 2 + leg3(smod);
        } else if (d == 6) {
            out.kodaira = KodairaType::I0star();
            out.cp = (smod == tmod) ? 2 : 1;
        } else {
            std::uint64_t n = d - 6;
            out.kodaira = KodairaType::Instar(n);
            bool four;
            if (d % 2 == 1) four = (mod_reduce(smod, 3) == 1);
            else four = (mod_reduce(smod + tmod, 3) == 0);
            out.cp = four ? 4 : 2;
        }
        return out;
    }
    if (a6v.equals(3) && a4v.at_least(3)) {
        if (d == 9) {
            Int s = model2_s3(c.a4(), c.a6(), 3);
            if (s != 0) {
                out.kodaira = KodairaType::IVstar();
                out.cp = 2 + leg3(s);
            } else {
                out.kodaira = KodairaType::IIIstar();
                out.cp = 2;
            }
        } else if (d == 10) {
            // translated model y^2 = x^3 + 9t x^2 + 81s: step-8 quadratic
            // Y^2 - s is separable mod 3, so this is IV* with c = 2 + (s|3)
            out.kodaira = KodairaType::IVstar();
            out.cp = 2 + leg3(td.s);
        } else if (d == 11) {
            out.kodaira = KodairaType::IIstar();
            out.cp = 1;
        } else if (d == 12) {
            // reduced model y^2 = x^3 + t x^2 + s has good reduction
            out.kodaira = KodairaType::I0();
            out.cp = 1;
            out.short_minimal = false;
            out.min_disc_valuation = 0;
        } else {
            std::uint64_t n = d - 12;
            out.kodaira = KodairaType::In(n);
            Int tmod = mod_reduce(td.t, 3);
            out.cp = (tmod == 1) ? n : epsilon(n);
            out.short_minimal = false;
            out.min_disc_valuation = d - 12;
        }
        return out;
    }
    if (a6v.equals(4) && a4v.at_least(3)) {
        out.kodaira = KodairaType::IVstar();
        out.cp = 2 + leg3(td.A6);
        return out;
    }
    if (a4v.equals(3) && a6v.at_least(5)) {
        out.kodaira = KodairaType::IIIstar();
        out.cp = 2;
        return out;
    }
    if (a4v.at_least(4) && a6v.equals(5)) {
        out.kodaira = KodairaType::IIstar();
        out.cp = 1;
        return out;
    }
    throw std::logic_error("classify_3: impossible valuation pattern");
}

inline LocalReduction classify_2(const Curve& curve) {
    const Int p = 2;
    auto st = strip_nonminimal_powers(curve, p);
    Curve c(st.a4, st.a6);
    std::uint64_t d = valuation(c.discriminant(), 2).v;

    LocalReduction out;
    out.p = p;
    out.rescalings = st.rescalings;
    out.short_minimal = (st.rescalings == 0);
    out.min_disc_valuation = d;

    auto delegate_instar = [&]() {
        LocalReduction g = generic_tate(to_long_model(c), p);
        if (g.kodaira.family != KodairaFamily::Instar)
            throw std::logic_error("classify_2: expected I_n* from the general algorithm");
        out.kodaira = g.kodaira;
        out.cp = g.cp;
    };

    long r4 = mpz_get_si(mod_reduce(c.a4(), 4).get_mpz_t());
    long r6 = mpz_get_si(mod_reduce(c.a6(), 4).get_mpz_t());

    static const bool type_II[4][4] = {
        //          a6: 0      1      2      3
        /* a4=0 */ {false, false, true, true},
        /* a4=1 */ {true, true, false, false},
        /* a4=2 */ {false, false, true, true},
        /* a4=3 */ {false, false, true, true},
    };
    static const bool type_III[4][4] = {
        /* a4=0 */ {false, false, false, false},
        /* a4=1 */ {false, false, false, true},
        /* a4=2 */ {true, true, false, false},
        /* a4=3 */ {true, false, false, false},
    };

    if (type_II[r4][r6]) {
        out.kodaira = KodairaType::II();
        out.cp = 1;
        return out;
    }
    if (type_III[r4][r6]) {
        out.kodaira = KodairaType::III();
        out.cp = 2;
        return out;
    }
    if (r6 == 1) {  // (0,1) or (3,1) mod 4: type IV, c from the mod-8 class
        long m4 = mpz_get_si(mod_reduce(c.a4(), 8).get_mpz_t());
        long m6 = mpz_get_si(mod_reduce(c.a6(), 8).get_mpz_t());
        bool c1 = (m4 == 0 && m6 == 5) || (m4 == 3 && m6 == 1) || (m4 == 4 && m6 == 5) ||
                  (m4 == 7 && m6 == 5);
        out.kodaira = KodairaType::IV();
        out.cp = c1 ? 1 : 3;
        return out;
    }

    if (r4 == 0 && r6 == 0) {
        // 4 | a4, 4 | a6
        long m16 = mpz_get_si(mod_reduce(c.a6(), 16).get_mpz_t());
        auto a4v = valuation(c.a4(), 2);
        if (m16 == 8 || m16 == 12) {
            out.kodaira = KodairaType::I0star();
            out.cp = (mod_reduce(c.a4(), 8) == 4) ? 1 : 2;
            return out;
        }
        if (a4v.equals(2)) {  // a6 = 0, 4 mod 16
            delegate_instar();
            return out;
        }
        if (m16 == 4) {
            out.kodaira = KodairaType::IVstar();
            out.cp = (mod_reduce(c.a6(), 32) == 20) ? 1 : 3;
            return out;
        }
        // a6 = 0 mod 16
        if (a4v.equals(3)) {
            out.kodaira = KodairaType::IIIstar();
            out.cp = 2;
            return out;
        }
        // alpha4 >= 4
        long m64 = mpz_get_si(mod_reduce(c.a6(), 64).get_mpz_t());
        if (m64 == 16) {
            // reduces to y^2 + y = x^3 + A4 x + ..., odd discriminant
            out.kodaira = KodairaType::I0();
            out.cp = 1;
            out.short_minimal = false;
            out.min_disc_valuation = d - 12;
            return out;
        }
        if (m64 == 32 || m64 == 48) {
            out.kodaira = KodairaType::IIstar();
            out.cp = 1;
            return out;
        }
        throw std::logic_error("classify_2: impossible congruence pattern");
    }

    // (a4, a6) = (1, 2) mod 4: everything hangs on the unit data (t, v, k)
    TateData td = tate_data(c, p);
    if (mod_reduce(c.a4(), 8) == 1) {
        // d = 8, v = 2
        if (d != 8) throw std::logic_error("classify_2: expected v_2(disc) = 8");
        std::uint64_t k = td.k.finite ? td.k.v : 64;
        long m8 = mpz_get_si(mod_reduce(c.a6(), 8).get_mpz_t());
        if (k == 3) {
            out.kodaira = KodairaType::I0star();
            out.cp = (mod_reduce(td.t, 4) == 1) ? 1 : 2;
            return out;
        }
        if (m8 == 2) {
            delegate_instar();
            return out;
        }
        out.kodaira = KodairaType::IVstar();
        out.cp = (k == 4) ? 1 : 3;
        return out;
    }

    // a4 = 5 mod 8: here a4 = -3t^2 with a 2-adic unit t = a6/2 mod 4, and
    // v_2(a6 - 2t^3) = d - 6 exactly
    if (d < 9) throw std::logic_error("classify_2: expected v_2(disc) >= 9");
    std::uint64_t k = d - 6;
    long m8 = mpz_get_si(mod_reduce(c.a6(), 8).get_mpz_t());
    if (m8 == 2) {
        if (k == 3) {
            out.kodaira = KodairaType::I0star();
            out.cp = 1;
            return out;
        }
        delegate_instar();
        return out;
    }
    // a6 = 6 mod 8, t = 3 mod 4
    switch (k) {
        case 3:
            out.kodaira = KodairaType::I0star();
            out.cp = 2;
            return out;
        case 4:
            out.kodaira = KodairaType::IIIstar();
            out.cp = 2;
            return out;
        case 5:
            out.kodaira = KodairaType::IIstar();
            out.cp = 1;
            return out;
        case 6:
            // d = 12: reduces to y^2 + xy = x^3 + ((3t-1)/4) x^2 + s, odd disc
            out.kodaira = KodairaType::I0();
            out.cp = 1;
            out.short_minimal = false;
            out.min_disc_valuation = 0;
            return out;
        default: {
            // d > 12: reduced model has type I_n, split iff t = 3 mod 8
            std::uint64_t n = d - 12;
            Int u = mod_reduce(-c.a4() * invmod(Int(3), Int(256)), 256);
            Int t = sqrt_2adic(u, 8);
            if (mod_reduce(t, 4) != mod_reduce(exact_div(c.a6(), Int(2)), 4)) t = 256 - t;
            out.kodaira = KodairaType::In(n);
            out.cp = (mod_reduce(t, 8) == 3) ? n : epsilon(n);
            out.short_minimal = false;
            out.min_disc_valuation = n;
            return out;
        }
    }
}

}  // namespace detail

// Local reduction data of a short model at p, by case dispatch on the Tate
// data.  Agrees with generic_tate on (kodaira, cp, min_disc_valuation).
inline LocalReduction classify(const Curve& curve, const Int& p) {
    if (!is_prime(p)) throw std::invalid_argument("classify: p must be prime");
    if (p >= 5) return detail::classify_ge5(curve, p);
    if (p == 3) return detail::classify_3(curve);
    return detail::classify_2(curve);
}

// Prime factorization of |n| by trial division (optionally seeded with a
// precomputed prime table covering all factors).
inline std::vector<std::pair<Int, unsigned>> factor_integer(const Int& n0) {
    if (n0 == 0) throw std::invalid_argument("factor_integer: zero");
    std::vector<std::pair<Int, unsigned>> fs;
    Int n = abs(n0);
    auto strip = [&](const Int& q) {
        unsigned e = 0;
        while (mod_reduce(n, q) == 0) {
            n = detail::exact_div(n, q);
            ++e;
        }
        if (e) fs.emplace_back(q, e);
    };
    strip(Int(2));
    strip(Int(3));
    Int q = 5;
    while (q * q <= n) {
        strip(q);
        q += 2;
        if (q * q > n) break;
        strip(q);
        q += 4;
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

// Tam(E) = product of c_p over all primes, computed on the minimal model
// (classify already accounts for non-minimal inputs).
inline Int tamagawa_product(const Curve& c) {
    Int tam = 1;
    for (const auto& [q, e] : factor_integer(c.discriminant())) {
        (void)e;
        tam *= classify(c, q).cp;
    }
    return tam;
}

}  // namespace tamlab

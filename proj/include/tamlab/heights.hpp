#pragma once

// Canonical and Weil heights on y^2 = x^3 + a4 x + a6, the archimedean
// series F_E built from the duplication map, rational point search, and the
// convenient-curve classifier.
//
// F_E(x) = (1/2) log|x| + (1/8) sum_n log(z_n)/4^n   with
//   z_n = 1 - 2a4/x_n^2 - 8a6/x_n^3 + a4^2/x_n^4,
//   x_{n+1} = (x_n^4 - 2a4 x_n^2 - 8a6 x_n + a4^2) / (4(x_n^3 + a4 x_n + a6)).
//
// On a curve whose quadratic G(x) = 2a4 x^2 + 8a6 x - a4^2 is negative on
// the real locus D, every z_n exceeds 1 and the iterates stay bounded away
// from 0, which yields the computable tail bounds used here.  For such
// curves that are also globally minimal with trivial Tamagawa product,
//   h^(P) = (1/2) log C^2 + F_E(x(P)),
// and h^(P) >= (1/2) h_W(P) for every rational point.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tamlab/curve.hpp"
#include "tamlab/sturm.hpp"
#include "tamlab/tate.hpp"

namespace tamlab {

// P = (A/C^2, B/C^3) with gcd(A, C) = gcd(B, C) = 1, C >= 1.
struct RationalPoint {
    Int A, B, C;

    friend bool operator==(const RationalPoint& p, const RationalPoint& q) {
        return p.A == q.A && p.B == q.B && p.C == q.C;
    }
};

inline void validate_point(const Curve& c, const RationalPoint& P) {
    if (P.C < 1) throw std::invalid_argument("point: C >= 1 required");
    if (gcd(P.A, P.C) != 1 || gcd(P.B, P.C) != 1)
        throw std::invalid_argument("point: coordinates not in lowest terms");
    Int c4 = P.C * P.C * P.C * P.C;
    Int rhs = P.A * P.A * P.A + c.a4() * P.A * c4 + c.a6() * c4 * P.C * P.C;
    if (P.B * P.B != rhs) throw std::invalid_argument("point does not lie on the curve");
}

enum class HeightMethod { LocalSum, DoublingOracle };

struct HeightReport {
    Int naive_height;   // max(|A|, C^2)
    double weil = 0;    // log of the naive height
    double canonical = 0;
    double f_e_value = 0;
    double tail_bound = 0;
    bool inequality_holds = false;  // canonical >= weil/2 - 1e-9
    HeightMethod method = HeightMethod::LocalSum;
};

struct FeValue {
    double value = 0;
    double tail_bound = 0;
};

// Exact test for the defining negativity condition: a4 <= 0 and
// G(x) = 2a4 x^2 + 8a6 x - a4^2 < 0 on all of D.  Equivalent integer
// inequalities in terms of T = a6/|a4|^(3/2):
//   one component:  a6 < 0 and 27 a6^2 > 4|a4|^3     (T < -2/sqrt(27))
//   two components: 8 a6^2 < |a4|^3                  (|T| < 1/sqrt(8))
//   a4 = 0:         a6 < 0
inline bool convenient_geometry(const Curve& c) {
    const Int& a4 = c.a4();
    const Int& a6 = c.a6();
    if (a4 > 0) return false;
    if (a4 == 0) return a6 < 0;
    Int abs4 = -a4;
    if (a6 < 0 && 27 * a6 * a6 > 4 * abs4 * abs4 * abs4) return true;  // one component
    return 8 * a6 * a6 < abs4 * abs4 * abs4;                           // two components
}

namespace detail {

inline double log_rat(const Rat& x) {
    if (x <= 0) throw std::domain_error("log_rat: nonpositive argument");
    signed long en, ed;
    double mn = mpz_get_d_2exp(&en, x.get_num().get_mpz_t());
    double md = mpz_get_d_2exp(&ed, x.get_den().get_mpz_t());
    return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * M_LN2;
}

inline double to_d(const Int& z) { return mpz_get_d(z.get_mpz_t()); }

inline Rat cubic_at(const Curve& c, const Rat& x) {
    return x * x * x + Rat(c.a4()) * x + Rat(c.a6());
}

// q(x) = x^4 - G(x) = x^4 - 2a4 x^2 - 8a6 x + a4^2 (positive on D)
inline Rat quartic_at(const Curve& c, const Rat& x) {
    Rat a4{c.a4()}, a6{c.a6()};
    return ((x * x - 2 * a4) * x - 8 * a6) * x + a4 * a4;
}

inline IntPoly curve_cubic(const Curve& c) {
    return IntPoly::from({c.a6(), c.a4(), Int(0), Int(1)});
}

// Tail data for the F_E series: a certified eps = inf_D(-G) > 0, the
// resulting lower bound mu for the iterates, and L >= log z_n for n >= 1.
struct FeTail {
    Rat eps;
    double mu = 0;
    double L = 0;
};

inline FeTail fe_tail_constants(const Curve& c) {
    if (!convenient_geometry(c))
        throw std::domain_error("curve does not satisfy the negativity condition");
    const Int& a4 = c.a4();
    const Int& a6 = c.a6();
    Int abs4 = abs(a4), abs6 = abs(a6);
    IntPoly cubic = curve_cubic(c);

    Rat eps(0);
    bool have = false;
    auto consider = [&](const Rat& v) {
        if (!have || v < eps) eps = v;
        have = true;
    };
    if (a4 == 0) {
        auto roots = isolate_real_roots(cubic);
        auto alpha = roots.back();
        while (!(alpha.lo > 0)) refine_root(cubic, alpha, alpha.width() / 16);
        consider(8 * Rat(abs6) * alpha.lo);
    } else {
        Rat xv = 2 * Rat(a6) / Rat(abs4);  // vertex of the upward parabola -G
        if (cubic_at(c, xv) >= 0)
            consider((Rat(abs4 * abs4 * abs4) - 8 * Rat(a6 * a6)) / Rat(abs4));
        auto minus_g = [&](const Rat& x) -> Rat {
            return 2 * Rat(abs4) * x * x - 8 * Rat(a6) * x + Rat(a4 * a4);
        };
        for (auto iv : isolate_real_roots(cubic)) {
            for (int pass = 0;; ++pass) {
                Rat lo_val;
                if (iv.lo <= xv && xv <= iv.hi) lo_val = minus_g(xv);
                else lo_val = std::min(minus_g(iv.lo), minus_g(iv.hi));
                if (lo_val > 0) {
                    consider(lo_val);
                    break;
                }
                if (pass > 200)
                    throw std::logic_error("fe_tail: could not certify the margin");
                refine_root(cubic, iv, iv.width() / 16);
            }
        }
    }
    if (!have || !(eps > 0)) throw std::logic_error("fe_tail: empty certificate");

    FeTail t;
    t.eps = eps;
    double s1 = 1.0 + to_d(abs4) + to_d(abs6);
    double Md = mpq_get_d(Rat(1 + root_bound(cubic)).get_mpq_t());
    double s2 = Md * Md * Md + to_d(abs4) * Md + to_d(abs6) + 1.0;
    t.mu = std::min(1.0 / s1, mpq_get_d(eps.get_mpq_t()) / s2);
    double m2 = t.mu * t.mu;
    double zeta = 2 * to_d(abs4) / m2 + 8 * to_d(abs6) / (m2 * t.mu) +
                  to_d(abs4) * to_d(abs4) / (m2 * m2);
    t.L = std::log1p(zeta);
    return t;
}

}  // namespace detail

// The archimedean series F_E(x) for x in D, with a certified tail bound.
// Requires the negativity condition (the tail bounds need it).
inline FeValue f_e(const Curve& c, const Rat& x0, unsigned terms = 40) {
    if (terms < 1) throw std::invalid_argument("f_e: terms >= 1 required");
    Rat fx0 = detail::cubic_at(c, x0);
    if (fx0 < 0) throw std::domain_error("f_e: x outside the real locus domain");
    auto tc = detail::fe_tail_constants(c);
    double tail = tc.L * std::pow(4.0, -static_cast<double>(terms)) / 6.0 * 1.01 + 1e-12;

    // first term (1/2)log|x| + (1/8)log z_0 = (1/8) log q(x), exactly
    Rat q0 = detail::quartic_at(c, x0);
    if (!(q0 > 0)) throw std::logic_error("f_e: quartic not positive on the domain");
    double sum = detail::log_rat(q0) / 8.0;

    // one exact step, then long-double iteration
    if (fx0 == 0) throw std::domain_error("f_e: x is a two-torsion abscissa");
    Rat x1 = q0 / (4 * fx0);
    long double x = static_cast<long double>(mpq_get_d(x1.get_mpq_t()));
    long double A4 = static_cast<long double>(detail::to_d(c.a4()));
    long double A6 = static_cast<long double>(detail::to_d(c.a6()));
    long double w = 0.25L;  // 1/4^n
    for (unsigned n = 1; n < terms; ++n) {
        if (!std::isfinite(static_cast<double>(x)) || x > 1e300L) break;  // z = 1 + O(x^-2)
        long double q = ((x * x - 2 * A4) * x - 8 * A6) * x + A4 * A4;
        long double z = q / (x * x * x * x);
        if (z < 1e-30L) z = 1e-30L;
        sum += static_cast<double>(logl(z) * w) / 8.0;
        long double f = (x * x + A4) * x + A6;
        if (f < std::numeric_limits<long double>::min())
            f = std::numeric_limits<long double>::min();
        x = q / (4 * f);
        w *= 0.25L;
    }
    return {sum, tail};
}

namespace detail {

// x-only duplication on exact coordinates: x = A/C^2 -> x(2P).
// Returns false when 2P is the identity (the cubic vanished).
struct XCoord {
    Int A, C;
};

inline bool duplicate_x(const Curve& c, XCoord& x) {
    Int C2 = x.C * x.C, C4 = C2 * C2, C6 = C4 * C2, C8 = C4 * C4;
    Int f = x.A * x.A * x.A + c.a4() * x.A * C4 + c.a6() * C6;  // y^2 C^6
    if (f == 0) return false;
    Int num = x.A * x.A * x.A * x.A - 2 * c.a4() * x.A * x.A * C4 -
              8 * c.a6() * x.A * C6 + c.a4() * c.a4() * C8;
    Int den = 4 * C2 * f;
    Int g = gcd(num, den);
    if (den < 0) g = -g;
    Int A2 = num / g, den2 = den / g;
    Int C2new = isqrt(den2);
    if (C2new * C2new != den2)
        throw std::logic_error("duplicate_x: denominator is not a square");
    x = {A2, C2new};
    return true;
}

inline Int naive_of(const XCoord& x) {
    Int c2 = x.C * x.C;
    Int a = abs(x.A);
    return a > c2 ? a : c2;
}

// identity reached within 8 doublings; sizes are capped so that non-torsion
// points abort after a couple of steps
inline bool is_torsion(const Curve& c, const RationalPoint& P) {
    XCoord probe{P.A, P.C};
    Int cap = naive_of(probe) + abs(c.discriminant()) + 65536;
    cap = cap * cap;
    for (int k = 0; k < 8; ++k) {
        if (!duplicate_x(c, probe)) return true;
        if (naive_of(probe) > cap) return false;
    }
    return false;
}

}  // namespace detail

// h^ via the quadratic-growth limit along doublings: (1/2) h_W(2^k P) / 4^k.
// Torsion (the identity reached within 8 doublings) gives exactly 0.
inline double canonical_height_oracle(const Curve& c, const RationalPoint& P,
                                      unsigned doublings = 5) {
    validate_point(c, P);
    if (detail::is_torsion(c, P)) return 0.0;
    detail::XCoord x{P.A, P.C};
    double scale = 1.0;
    for (unsigned k = 0; k < doublings; ++k) {
        if (!detail::duplicate_x(c, x)) return 0.0;
        scale *= 4.0;
    }
    return 0.5 * detail::log_rat(Rat(detail::naive_of(x))) / scale;
}

// Doubling with the y-coordinate recovered from the curve equation
// (the sign is irrelevant for heights).
inline RationalPoint double_point(const Curve& c, const RationalPoint& P) {
    validate_point(c, P);
    detail::XCoord x{P.A, P.C};
    if (!detail::duplicate_x(c, x))
        throw std::domain_error("double_point: 2P is the identity");
    Int c4 = x.C * x.C * x.C * x.C;
    Int rhs = x.A * x.A * x.A + c.a4() * x.A * c4 + c.a6() * c4 * x.C * x.C;
    Int B = isqrt(rhs);
    if (B * B != rhs) throw std::logic_error("double_point: not a square");
    return {x.A, B, x.C};
}

// h^ via the local-height decomposition.  Requires a globally minimal model
// with trivial Tamagawa product and x(P) in the negativity domain.
inline HeightReport canonical_height(const Curve& c, const RationalPoint& P,
                                     unsigned terms = 40) {
    validate_point(c, P);
    Int tam = tamagawa_product(c);
    if (tam != 1)
        throw std::domain_error("canonical_height: Tamagawa product is " + tam.get_str() +
                                ", not 1");
    for (const auto& [p, e] : factor_integer(c.discriminant())) {
        (void)e;
        if (!is_short_minimal(c, p))
            throw std::domain_error("canonical_height: model is not minimal at p = " +
                                    p.get_str());
    }

    HeightReport r;
    r.method = HeightMethod::LocalSum;
    Int c2 = P.C * P.C;
    r.naive_height = abs(P.A) > c2 ? abs(P.A) : c2;
    r.weil = detail::log_rat(Rat(r.naive_height));

    Rat x = Rat(P.A) / Rat(c2);
    bool torsion = detail::cubic_at(c, x) == 0 || detail::is_torsion(c, P);
    if (torsion) {
        r.canonical = 0;
        r.f_e_value = 0;
        r.tail_bound = 0;
        r.inequality_holds = r.canonical >= r.weil / 2 - 1e-9;
        return r;
    }

    FeValue fe = f_e(c, x, terms);
    r.f_e_value = fe.value;
    r.tail_bound = fe.tail_bound;
    r.canonical = detail::log_rat(Rat(c2)) / 2 + fe.value;
    r.inequality_holds = r.canonical >= r.weil / 2 - 1e-9;
    return r;
}

// All points with max(|A|, C^2) <= bound, found by testing the cubic for a
// square on every admissible (A, C).  Deterministic order: (C, A, -B).
inline std::vector<RationalPoint> find_points(const Curve& c, const Int& naive_bound) {
    if (naive_bound < 1) throw std::invalid_argument("find_points: bound >= 1 required");
    std::vector<RationalPoint> out;
    Int rhs, c2, c4, c6;
    for (Int C = 1; C * C <= naive_bound; ++C) {
        c2 = C * C;
        c4 = c2 * c2;
        c6 = c4 * c2;
        for (Int A = -naive_bound; A <= naive_bound; ++A) {
            if (gcd(A, C) != 1) continue;
            rhs = A * A * A + c.a4() * A * c4 + c.a6() * c6;
            if (rhs < 0 || !is_square(rhs)) continue;
            Int B = isqrt(rhs);
            out.push_back({A, B, C});
            if (B != 0) out.push_back({A, -B, C});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Convenient curves
// ---------------------------------------------------------------------------

enum class ConvenientKind { OneComponent, TwoComponent, NotConvenient };

struct ConvenientTest {
    int component_count = 1;      // 2 iff disc > 0 (three real roots)
    bool a4_nonpositive = false;
    bool tamagawa_trivial = false;
    bool globally_minimal = false;
    bool geometry_ok = false;     // G < 0 on D, decided by exact comparisons
    bool boundary = false;        // 8 a6^2 = |a4|^3: G vanishes on the closure
    std::string t_bucket;         // where T = a6/|a4|^(3/2) sits
    std::vector<RootInterval> roots;  // gamma < beta < alpha, or just alpha
    ConvenientKind kind = ConvenientKind::NotConvenient;

    bool convenient() const { return kind != ConvenientKind::NotConvenient; }
};

inline ConvenientTest is_convenient(const Curve& c) {
    ConvenientTest t;
    const Int& a4 = c.a4();
    const Int& a6 = c.a6();
    t.component_count = (4 * a4 * a4 * a4 + 27 * a6 * a6 < 0) ? 2 : 1;
    t.a4_nonpositive = a4 <= 0;

    if (a4 > 0) t.t_bucket = "a4>0";
    else if (a4 == 0) t.t_bucket = a6 < 0 ? "a4=0,a6<0" : "a4=0,a6>0";
    else {
        Int cube = -a4 * a4 * a4;  // |a4|^3
        if (a6 < 0 && 27 * a6 * a6 > 4 * cube) t.t_bucket = "T<-2/sqrt(27)";
        else if (8 * a6 * a6 < cube) t.t_bucket = "|T|<1/sqrt(8)";
        else if (8 * a6 * a6 == cube) {
            t.t_bucket = "|T|=1/sqrt(8)";
            t.boundary = true;
        } else t.t_bucket = a6 < 0 ? "T in [-2/sqrt(27),-1/sqrt(8)]" : "T>=1/sqrt(8)";
    }
    t.geometry_ok = convenient_geometry(c);

    t.globally_minimal = true;
    Int tam = 1;
    for (const auto& [p, e] : factor_integer(c.discriminant())) {
        (void)e;
        auto r = classify(c, p);
        if (!r.short_minimal) t.globally_minimal = false;
        tam *= r.cp;
    }
    t.tamagawa_trivial = (tam == 1);

    t.roots = isolate_real_roots(detail::curve_cubic(c));

    if (t.geometry_ok && t.tamagawa_trivial && t.globally_minimal)
        t.kind = (t.component_count == 2) ? ConvenientKind::TwoComponent
                                          : ConvenientKind::OneComponent;
    return t;
}

// Certified sign analysis of F_E on (-1, 1) intersected with the real locus,
// for two-component curves: positivity on every grid cell extends the height
// inequality to points with |x(P)| < 1.  Inconclusive cells are reported
// separately from certified-negative ones; `certified` is true only when
// every cell passed the positivity test.
struct FePositivity {
    bool certified = false;
    int cells = 0;
    int positive_cells = 0;
    int negative_cells = 0;
    int inconclusive_cells = 0;
};

// upper bound for (1/8) sum_{n>=1} log(z_n)/4^n, from z_n <= 1 + zeta
inline double fe_z_sum_cap(const Curve& c) { return detail::fe_tail_constants(c).L / 24.0; }

inline FePositivity check_fe_positivity(const Curve& c, int grid = 64) {
    if (!convenient_geometry(c) || c.a4() > 0)
        throw std::domain_error("check_fe_positivity: negativity condition required");
    if (4 * c.a4() * c.a4() * c.a4() + 27 * c.a6() * c.a6() >= 0)
        throw std::domain_error("check_fe_positivity: two real components required");

    IntPoly cubic = detail::curve_cubic(c);
    auto roots = isolate_real_roots(cubic);
    for (auto& iv : roots) refine_root(cubic, iv, Rat(1, 1 << 16));
    double zcap = fe_z_sum_cap(c);

    // outer cover of (-1,1) n ([gamma,beta] u [alpha,oo))
    std::vector<std::pair<Rat, Rat>> segments;
    auto add_segment = [&](Rat lo, Rat hi) {
        lo = std::max(lo, Rat(-1));
        hi = std::min(hi, Rat(1));
        if (lo < hi) segments.emplace_back(lo, hi);
    };
    add_segment(roots[0].lo, roots[1].hi);
    add_segment(roots[2].lo, Rat(1));

    FePositivity out;
    Rat a4{c.a4()}, a6{c.a6()};
    for (const auto& [lo, hi] : segments) {
        for (int i = 0; i < grid; ++i) {
            Rat a = lo + (hi - lo) * i / grid;
            Rat b = lo + (hi - lo) * (i + 1) / grid;
            ++out.cells;
            // bounds of q(x) = x^4 + 2|a4| x^2 - 8 a6 x + a4^2 on [a, b]
            Rat xmin2 = (a <= 0 && 0 <= b) ? Rat(0) : std::min(a * a, b * b);
            Rat xmax2 = std::max(a * a, b * b);
            Rat qlow = xmin2 * xmin2 - 2 * a4 * xmin2 +
                       ((a6 >= 0) ? -8 * a6 * b : -8 * a6 * a) + a4 * a4;
            if (qlow >= 1) {
                // F_E > (1/8) log q >= 0, since every z_n > 1
                ++out.positive_cells;
                continue;
            }
            Rat qhigh = xmax2 * xmax2 - 2 * a4 * xmax2 +
                        ((a6 >= 0) ? -8 * a6 * a : -8 * a6 * b) + a4 * a4;
            double fe_high = detail::log_rat(qhigh) / 8.0 + zcap;
            if (fe_high < 0) ++out.negative_cells;
            else ++out.inconclusive_cells;
        }
    }
    out.certified = (out.cells > 0 && out.positive_cells == out.cells);
    return out;
}

// 64 T^4 - 17 T^2 + 9/8, whose roots are the critical values of
// T = a6/|a4|^(3/2) at which the cubic and the quadratic share a root;
// it factors as (1/8)(8T^2 - 1)(8T + 3)(8T - 3).
inline Rat shared_root_polynomial(const Rat& T) {
    Rat t2 = T * T;
    return 64 * t2 * t2 - 17 * t2 + Rat(9, 8);
}

}  // namespace tamlab

#pragma once

// Exact local densities of reduction types for short Weierstrass curves
// ordered by height, and the Dirichlet series built from them.
//
// delta_prime(p,K,c) is the proportion of curves that are p-minimal with
// Kodaira type K and c_p = c; delta_hat covers the two extra families at
// p = 2, 3 whose minimal models leave short form; delta(p,c) is the total
// proportion with c_p = c after the geometric rescaling factor
// p^10/(p^10 - 1).  Everything here is an exact rational until the final
// series evaluations, which carry certified error bounds.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tamlab/int_util.hpp"
#include "tamlab/kodaira.hpp"
#include "tamlab/primes.hpp"
#include "tamlab/qnum.hpp"

namespace tamlab {

struct SeriesValue {
    double value = 0;
    double error_bound = 0;
    std::uint64_t prime_cutoff = 0;
    std::uint64_t coefficient_cutoff = 0;
};

namespace detail {

// sum_{n >= from} x^n
inline Rat geom_from(const Rat& x, std::uint64_t from) {
    return rat_pow(x, from) / (1 - x);
}

// sum_{n >= from, n = from mod 2} x^n
inline Rat geom_from_step2(const Rat& x, std::uint64_t from) {
    return rat_pow(x, from) / (1 - x * x);
}

// sum_{n >= from} n x^n
inline Rat arith_geom_from(const Rat& x, std::uint64_t from) {
    Rat one_minus = 1 - x;
    return rat_pow(x, from) * (Rat(from) - Rat(from - 1) * x) / (one_minus * one_minus);
}

inline void require_prime_ge5(const Int& p) {
    if (p < 5 || !is_prime(p)) throw std::invalid_argument("prime >= 5 required");
}

}  // namespace detail

// Proportion of p-minimal curves with the given type and Tamagawa number.
// Zero for admissible pairs that do not occur; throws for pairs that violate
// the component-group constraints.
inline Rat delta_prime(const Int& p, const KodairaType& k, std::uint64_t c) {
    if (!is_prime(p)) throw std::invalid_argument("delta_prime: p must be prime");
    if (!cp_admissible(k, c)) throw std::domain_error("delta_prime: inadmissible (K, c)");
    using F = KodairaFamily;
    const std::uint64_t n = k.n;

    if (p >= 5) {
        Rat q{p};
        switch (k.family) {
            case F::I0: return (q - 1) / q;
            case F::In:
                if (n == 1) return c == 1 ? (q - 1) * (q - 1) / rat_pow(q, 3) : Rat(0);
                if (n == 2) return c == 2 ? (q - 1) * (q - 1) / rat_pow(q, 4) : Rat(0);
                if (c == n || c == epsilon(n))
                    return (q - 1) * (q - 1) / (2 * rat_pow(q, n + 2));
                return Rat(0);
            case F::II: return (q - 1) / rat_pow(q, 3);
            case F::III: return (q - 1) / rat_pow(q, 4);
            case F::IV: return (q - 1) / (2 * rat_pow(q, 5));
            case F::I0star:
                if (c == 1) return (q * q - 1) / (3 * rat_pow(q, 7));
                if (c == 2) return (q - 1) / (2 * rat_pow(q, 6));
                return (q - 1) * (q - 2) / (6 * rat_pow(q, 7));
            case F::Instar: return (q - 1) * (q - 1) / (2 * rat_pow(q, 7 + n));
            case F::IVstar: return (q - 1) / (2 * rat_pow(q, 8));
            case F::IIIstar: return (q - 1) / rat_pow(q, 9);
            case F::IIstar: return (q - 1) / rat_pow(q, 10);
        }
    }

    if (p == 2) {
        switch (k.family) {
            case F::I0:
            case F::In: return Rat(0);  // no multiplicative reduction in short form at 2
            case F::II: return Rat(1, 2);
            case F::III: return Rat(1, 4);
            case F::IV: return Rat(1, 16);
            case F::I0star: return c == 4 ? Rat(0) : Rat(1, 32);
            case F::Instar: return make_rat(1, pow_int(2, n + 6));
            case F::IVstar: return Rat(1, 128);
            case F::IIIstar: return Rat(1, 128);
            case F::IIstar: return Rat(1, 256);
        }
    }

    // p == 3
    switch (k.family) {
        case F::I0: return Rat(2, 3);
        case F::In: return Rat(0);
        case F::II: return Rat(2, 9);
        case F::III: return Rat(2, 27);
        case F::IV: return Rat(1, 81);
        case F::I0star:
            if (c == 1) return make_rat(8, pow_int(3, 7));
            if (c == 2) return make_rat(1, pow_int(3, 5));
            return make_rat(1, pow_int(3, 7));
        case F::Instar: return make_rat(2, pow_int(3, n + 6));
        case F::IVstar: return make_rat(7, pow_int(3, 9));
        case F::IIIstar: return make_rat(10, pow_int(3, 9));
        case F::IIstar: return make_rat(2, pow_int(3, 9));
    }
    throw std::logic_error("unreachable");
}

// Proportion of curves at p = 2, 3 whose minimal model leaves short
// Weierstrass form, by resulting type and Tamagawa number.
inline Rat delta_hat(const Int& p, const KodairaType& k, std::uint64_t c) {
    if (p != 2 && p != 3) throw std::domain_error("delta_hat: defined for p = 2, 3 only");
    if (!cp_admissible(k, c)) throw std::domain_error("delta_hat: inadmissible (K, c)");
    using F = KodairaFamily;
    const std::uint64_t n = k.n;
    const Int num = (p == 2) ? 1 : 2;  // per-(n, c) numerators below

    if (k.family == F::I0 && c == 1)
        return p == 2 ? Rat(1, 512) : make_rat(4, pow_int(3, 11));
    if (k.family != F::In) return Rat(0);

    if (n == 1) return c == 1 ? (p == 2 ? make_rat(1, pow_int(2, 11)) : make_rat(4, pow_int(3, 12)))
                              : Rat(0);
    if (n == 2) return c == 2 ? (p == 2 ? make_rat(1, pow_int(2, 12)) : make_rat(4, pow_int(3, 13)))
                              : Rat(0);
    if (c == n || c == epsilon(n)) return make_rat(num, pow_int(p, n + 11));
    return Rat(0);
}

namespace detail {

// table route: geometric factor times the sum over all types with c_p = c,
// with the I_n and I_n* families summed in closed form
inline Rat delta_table_route(const Int& p, std::uint64_t c) {
    Rat x = Rat(1) / Rat(p);
    Rat g = rat_pow(Rat(p), 10) / (rat_pow(Rat(p), 10) - 1);

    if (p >= 5) {
        Rat q{p};
        Rat w = (q - 1) * (q - 1) / 2;  // I_n family weight: w * x^(n+2)
        Rat sum = 0;
        switch (c) {
            case 1:
                sum += (q - 1) / q;                        // I0
                sum += (q - 1) * (q - 1) / rat_pow(q, 3);  // I1
                sum += w * geom_from_step2(x, 3) * x * x;  // I_n, n >= 3 odd, c = 1
                sum += (q - 1) / rat_pow(q, 3);            // II
                sum += (q - 1) / (2 * rat_pow(q, 5));      // IV
                sum += (q * q - 1) / (3 * rat_pow(q, 7));  // I0*
                sum += (q - 1) / (2 * rat_pow(q, 8));      // IV*
                sum += (q - 1) / rat_pow(q, 10);           // II*
                break;
            case 2:
                sum += (q - 1) * (q - 1) / rat_pow(q, 4);  // I2
                sum += w * geom_from_step2(x, 4) * x * x;  // I_n, n >= 4 even, c = 2
                sum += (q - 1) / rat_pow(q, 4);            // III
                sum += (q - 1) / (2 * rat_pow(q, 6));      // I0*
                sum += w * geom_from(x, 8);                // I_n*, n >= 1
                sum += (q - 1) / rat_pow(q, 9);            // III*
                break;
            case 3:
                sum += w * rat_pow(x, 5);                  // I3
                sum += (q - 1) / (2 * rat_pow(q, 5));      // IV
                sum += (q - 1) / (2 * rat_pow(q, 8));      // IV*
                break;
            case 4:
                sum += w * rat_pow(x, 6);                        // I4
                sum += (q - 1) * (q - 2) / (6 * rat_pow(q, 7));  // I0*
                sum += w * geom_from(x, 8);                      // I_n*, n >= 1
                break;
            default:
                sum += w * rat_pow(x, c + 2);  // I_c only
                break;
        }
        return g * sum;
    }

    // p = 2, 3: delta' plus delta_hat, with the I_n tails in closed form
    Rat sum = 0;
    const bool two = (p == 2);
    Rat hat_w = two ? Rat(1) : Rat(2);  // I_n hat family weight: hat_w * x^(n+11)
    switch (c) {
        case 1:
            sum += two ? Rat(0) : Rat(2, 3);                                 // I0
            sum += two ? Rat(1, 2) : Rat(2, 9);                              // II
            sum += two ? Rat(1, 16) : Rat(1, 81);                            // IV
            sum += two ? Rat(1, 32) : make_rat(8, pow_int(3, 7));            // I0*
            sum += two ? Rat(1, 128) : make_rat(7, pow_int(3, 9));           // IV*
            sum += two ? Rat(1, 256) : make_rat(2, pow_int(3, 9));           // II*
            sum += two ? Rat(1, 512) : make_rat(4, pow_int(3, 11));          // I0 hat
            sum += two ? make_rat(1, pow_int(2, 11))
                       : make_rat(4, pow_int(3, 12));                        // I1 hat
            sum += hat_w * geom_from_step2(x, 3) * rat_pow(x, 11);           // I_n hat, n odd >= 3
            break;
        case 2:
            sum += two ? Rat(1, 4) : Rat(2, 27);                             // III
            sum += two ? Rat(1, 32) : make_rat(1, pow_int(3, 5));            // I0*
            sum += (two ? Rat(1) : Rat(2)) * geom_from(x, 7);                // I_n*, n >= 1
            sum += two ? Rat(1, 128) : make_rat(10, pow_int(3, 9));          // III*
            sum += two ? make_rat(1, pow_int(2, 12))
                       : make_rat(4, pow_int(3, 13));                        // I2 hat
            sum += hat_w * geom_from_step2(x, 4) * rat_pow(x, 11);           // I_n hat, n even >= 4
            break;
        case 3:
            sum += two ? Rat(1, 16) : Rat(1, 81);                            // IV
            sum += two ? Rat(1, 128) : make_rat(7, pow_int(3, 9));           // IV*
            sum += hat_w * rat_pow(x, 14);                                   // I3 hat
            break;
        case 4:
            sum += two ? Rat(0) : make_rat(1, pow_int(3, 7));                // I0*
            sum += (two ? Rat(1) : Rat(2)) * geom_from(x, 7);                // I_n*, n >= 1
            sum += hat_w * rat_pow(x, 15);                                   // I4 hat
            break;
        default:
            sum += hat_w * rat_pow(x, c + 11);                               // I_c hat
            break;
    }
    return g * sum;
}

// closed forms for p >= 5
inline Rat delta_closed_form(const Int& p, std::uint64_t c) {
    Rat q{p};
    Rat cyc = rat_pow(q, 8) + rat_pow(q, 6) + rat_pow(q, 4) + q * q + 1;
    switch (c) {
        case 1:
            return 1 - q *
                           (6 * rat_pow(q, 7) + 9 * rat_pow(q, 6) + 9 * rat_pow(q, 5) +
                            7 * rat_pow(q, 4) + 8 * rat_pow(q, 3) + 7 * q * q + 9 * q + 6) /
                           (6 * (q + 1) * (q + 1) * cyc);
        case 2:
            return q *
                   (2 * rat_pow(q, 7) + 2 * rat_pow(q, 6) + rat_pow(q, 5) + rat_pow(q, 4) +
                    2 * rat_pow(q, 3) + q * q + 2 * q + 2) /
                   (2 * (q + 1) * (q + 1) * cyc);
        case 3: return q * q * (rat_pow(q, 4) + 1) / (2 * (q + 1) * cyc);
        case 4: return rat_pow(q, 3) * (3 * q * q - 2 * q + 1) / (6 * (q + 1) * cyc);
        default:
            return (rat_pow(q, 10) - 2 * rat_pow(q, 9) + rat_pow(q, 8)) /
                   (2 * rat_pow(q, c) * (rat_pow(q, 10) - 1));
    }
}

}  // namespace detail

// Total proportion of curves whose minimal model has c_p = c.  For p >= 5
// the table sum and the closed form are both evaluated and must agree.
inline Rat delta(const Int& p, std::uint64_t c) {
    if (c < 1) throw std::invalid_argument("delta: c >= 1 required");
    if (!is_prime(p)) throw std::invalid_argument("delta: p must be prime");
    Rat table = detail::delta_table_route(p, c);
    if (p >= 5) {
        Rat closed = detail::delta_closed_form(p, c);
        if (table != closed) throw std::logic_error("delta: table sum != closed form");
    }
    return table;
}

// sum_c delta(p, c), with the c >= 5 tail summed in closed form; equals 1
inline Rat delta_total(const Int& p) {
    Rat total = 0;
    for (std::uint64_t c = 1; c <= 4; ++c) total += delta(p, c);
    Rat x = Rat(1) / Rat(p);
    Rat g = rat_pow(Rat(p), 10) / (rat_pow(Rat(p), 10) - 1);
    if (p >= 5) {
        Rat w = (Rat(p) - 1) * (Rat(p) - 1) / 2;
        total += g * w * detail::geom_from(x, 7);            // sum_{c>=5} w x^(c+2)
    } else {
        Rat hat_w = (p == 2) ? Rat(1) : Rat(2);
        total += g * hat_w * detail::geom_from(x, 16);       // sum_{c>=5} hat_w x^(c+11)
    }
    return total;
}

// exact local factor sum_c c * delta(p, c) of the series at s = -1
inline Rat average_cp_local(const Int& p) {
    Rat total = 0;
    for (std::uint64_t c = 1; c <= 4; ++c) total += Rat(c) * delta(p, c);
    Rat x = Rat(1) / Rat(p);
    Rat g = rat_pow(Rat(p), 10) / (rat_pow(Rat(p), 10) - 1);
    // c >= 5 tails: the only types there are I_c (and I_c hat at p = 2, 3)
    if (p >= 5) {
        Rat w = (Rat(p) - 1) * (Rat(p) - 1) / 2;
        total += g * w * x * x * detail::arith_geom_from(x, 5);
    } else {
        Rat hat_w = (p == 2) ? Rat(1) : Rat(2);
        total += g * hat_w * detail::arith_geom_from(x, 5) * rat_pow(x, 11);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Dirichlet series evaluations with certified tails
// ---------------------------------------------------------------------------

namespace detail {

// Bounds used for the omitted primes q > P (all proofs reduce to the closed
// forms above, valid for q >= 5):
//   1 - delta_q(1) < 1.375 / q^2        and so  prod_{q>P} delta_q(1) >= 1 - 1.375/P
//   delta_q(c)     < 2 / q^c  (c >= 2)  and so  sum_{q>P} delta_q(c) <= 2 (P^(1-c)/(c-1) + P^(-c))
//   sum_{c>=2} c delta_q(c) < 4.2/q^2 for q >= 100
inline qreal delta_q5(const Int& p, std::uint64_t c) { return to_qreal(delta_closed_form(p, c)); }

inline std::vector<std::uint64_t> divisors_of(std::uint64_t m) {
    std::vector<std::uint64_t> ds;
    for (std::uint64_t d = 1; d * d <= m; ++d)
        if (m % d == 0) {
            ds.push_back(d);
            if (d != m / d) ds.push_back(m / d);
        }
    std::sort(ds.begin(), ds.end());
    return ds;
}

}  // namespace detail

// P_Tam(m): proportion of curves with Tamagawa product m, as the m-th
// Dirichlet coefficient of the truncated Euler product.
inline SeriesValue p_tam(std::uint64_t m, std::uint64_t prime_cutoff = 100000) {
    if (m < 1) throw std::invalid_argument("p_tam: m >= 1 required");
    if (prime_cutoff < 100) prime_cutoff = 100;
    auto ds = detail::divisors_of(m);
    auto index_of = [&](std::uint64_t d) {
        return std::lower_bound(ds.begin(), ds.end(), d) - ds.begin();
    };

    std::vector<qreal> coef(ds.size(), 0);
    coef[0] = 1;
    auto primes = primes_up_to(prime_cutoff);
    std::vector<qreal> local(ds.size());
    for (auto p : primes) {
        Int P{static_cast<unsigned long>(p)};
        for (std::size_t i = 0; i < ds.size(); ++i)
            local[i] = (p >= 5) ? detail::delta_q5(P, ds[i]) : to_qreal(delta(P, ds[i]));
        std::vector<qreal> next(ds.size(), 0);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (coef[i] == 0) continue;
            for (std::size_t j = 0; j < ds.size(); ++j) {
                std::uint64_t prod = ds[i] * ds[j];
                if (prod > m || m % prod != 0) continue;
                next[index_of(prod)] += coef[i] * local[j];
            }
        }
        coef = next;
    }

    qreal a = coef[index_of(m)];
    qreal pc = static_cast<qreal>(prime_cutoff);
    qreal tail1 = 1.375Q / pc;       // relative defect of the omitted delta_q(1) product
    qreal cross = 0;                 // assignments using c > 1 at an omitted prime
    for (auto d : ds) {
        if (d < 2) continue;
        cross += 2 * (powq(pc, 1 - static_cast<qreal>(d)) / (d - 1) + powq(pc, -static_cast<qreal>(d)));
    }
    qreal lo = a * (1 - tail1), hi = a + cross;
    SeriesValue out;
    out.value = qd((lo + hi) / 2);
    out.error_bound = qd((hi - lo) / 2 + a * 1e-25Q);
    out.prime_cutoff = prime_cutoff;
    out.coefficient_cutoff = m;
    return out;
}

// Local factor sum_c delta_p(c) c^(-s) truncated at c_cutoff, with the exact
// geometric tail at s = -1 and a certified bound otherwise.
inline SeriesValue l_tam_local(const Int& p, double s, std::uint64_t c_cutoff = 64) {
    if (s < -1) throw std::domain_error("l_tam_local: s < -1 not certified");
    if (c_cutoff < 8) c_cutoff = 8;
    qreal partial = 0;
    for (std::uint64_t c = 1; c <= c_cutoff; ++c) {
        qreal d = (p >= 5) ? detail::delta_q5(p, c) : to_qreal(delta(p, c));
        partial += d * powq(static_cast<qreal>(c), static_cast<qreal>(-s));
    }
    // tail over c > c_cutoff: 0 <= tail <= sum c*delta_p(c), exact at s = -1
    Rat x = Rat(1) / Rat(p);
    Rat g = rat_pow(Rat(p), 10) / (rat_pow(Rat(p), 10) - 1);
    Rat tail_max_rat;
    if (p >= 5) {
        Rat w = (Rat(p) - 1) * (Rat(p) - 1) / 2;
        tail_max_rat = g * w * x * x * detail::arith_geom_from(x, c_cutoff + 1);
    } else {
        Rat hat_w = (p == 2) ? Rat(1) : Rat(2);
        tail_max_rat = g * hat_w * detail::arith_geom_from(x, c_cutoff + 1) * rat_pow(x, 11);
    }
    qreal tail_max = to_qreal(tail_max_rat);
    qreal lo = partial, hi = partial + tail_max;
    if (s == -1.0) lo = hi;  // the bound is the exact tail value there
    SeriesValue out;
    out.value = qd((lo + hi) / 2);
    out.error_bound = qd((hi - lo) / 2 + 1e-30Q);
    out.prime_cutoff = to_u64(p);
    out.coefficient_cutoff = c_cutoff;
    return out;
}

// L_Tam(s) = prod_p sum_c delta_p(c) c^(-s); at s = -1 this is the average
// Tamagawa product, at s = 0 the total probability 1.
inline SeriesValue l_tam(double s, std::uint64_t prime_cutoff = 100000,
                         std::uint64_t c_cutoff = 64) {
    if (s < -1) throw std::domain_error("l_tam: s < -1 not certified");
    if (prime_cutoff < 100) prime_cutoff = 100;
    qreal lo = 1, hi = 1;
    for (auto p : primes_up_to(prime_cutoff)) {
        auto f = l_tam_local(Int{static_cast<unsigned long>(p)}, s, c_cutoff);
        qreal v = static_cast<qreal>(f.value), e = static_cast<qreal>(f.error_bound);
        lo *= v - e;
        hi *= v + e;
    }
    // omitted primes: 1 - 1.375/q^2 < lambda_q(s) < 1 + 4.2/q^2 for q > P
    qreal pc = static_cast<qreal>(prime_cutoff);
    lo *= 1 - 1.375Q / pc;
    hi *= 1 + 4.2Q / pc;
    SeriesValue out;
    out.value = qd((lo + hi) / 2);
    out.error_bound = qd((hi - lo) / 2 + 1e-25Q);
    out.prime_cutoff = prime_cutoff;
    out.coefficient_cutoff = c_cutoff;
    return out;
}

// ---------------------------------------------------------------------------
// Constants: the minimal-model density rho and the convenient-curve constant
// ---------------------------------------------------------------------------

struct DensityConstants {
    Rat rho_pi10_coefficient;  // rho = coefficient / pi^10
    double rho = 0;
    Rat kappa1;                // 3/20
    double kappa2 = 0;         // 3 sqrt(6) / 40
    double kappa = 0;          // rho * (kappa1 + kappa2)
};

// rho = (255/256)(19682/19683) prod_{p >= 5} (1 - p^-10), via
// zeta(10) = pi^10 / 93555.
inline DensityConstants density_constants() {
    DensityConstants dc;
    dc.rho_pi10_coefficient = Rat(255, 256) * Rat(19682, 19683) * Rat(1024, 1023) *
                              Rat(59049, 59048) * 93555;
    qreal pi10 = powq(M_PIq, 10);
    qreal rho = to_qreal(dc.rho_pi10_coefficient) / pi10;
    dc.rho = qd(rho);
    dc.kappa1 = Rat(3, 20);
    qreal k2 = 3 * sqrtq(6.0Q) / 40;
    dc.kappa2 = qd(k2);
    dc.kappa = qd(rho * (to_qreal(dc.kappa1) + k2));
    return dc;
}

inline double rho_minimal() { return density_constants().rho; }

// Density of convenient curves: rho (kappa1 + kappa2) P_Tam(1); the same
// number in closed form is 12805748865 (2 + sqrt 6) / (1830488 pi^10) P_Tam(1).
inline SeriesValue convenient_density(std::uint64_t prime_cutoff = 100000) {
    auto dc = density_constants();
    auto p1 = p_tam(1, prime_cutoff);
    qreal factor = to_qreal(dc.rho_pi10_coefficient) / powq(M_PIq, 10) *
                   (to_qreal(dc.kappa1) + 3 * sqrtq(6.0Q) / 40);
    qreal v = static_cast<qreal>(p1.value), e = static_cast<qreal>(p1.error_bound);
    SeriesValue out;
    out.value = qd(factor * v);
    out.error_bound = qd(factor * e + 1e-25Q);
    out.prime_cutoff = prime_cutoff;
    out.coefficient_cutoff = 1;
    return out;
}

}  // namespace tamlab

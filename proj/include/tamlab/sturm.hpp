#pragma once

// Exact real-root isolation for integer polynomials: Sturm chains over Q,
// sign-variation counting, and bisection to rational isolating intervals.
// No floating point feeds any boolean decision here.

#include <stdexcept>
#include <vector>

#include "tamlab/int_util.hpp"

namespace tamlab {

// Dense polynomial over Z; coefficient i is the x^i coefficient.
struct IntPoly {
    std::vector<Int> coef;

    static IntPoly from(std::vector<Int> c) {
        IntPoly f{std::move(c)};
        f.trim();
        return f;
    }

    void trim() {
        while (!coef.empty() && coef.back() == 0) coef.pop_back();
    }
    bool is_zero() const { return coef.empty(); }
    int degree() const { return static_cast<int>(coef.size()) - 1; }

    Rat eval(const Rat& x) const {
        Rat acc = 0;
        for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * x + Rat(*it);
        return acc;
    }
    int sign_at(const Rat& x) const { return sgn(eval(x)); }

    IntPoly derivative() const {
        if (coef.size() <= 1) return {};
        std::vector<Int> d(coef.size() - 1);
        for (std::size_t i = 1; i < coef.size(); ++i) d[i - 1] = Int(i) * coef[i];
        return from(std::move(d));
    }

    // divide out the content (gcd of coefficients), keeping the sign
    void normalize_content() {
        Int g = 0;
        for (const auto& c : coef) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g > 1)
            for (auto& c : coef) c /= g;
    }

  private:
    static int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }
};

// Cauchy bound: all real roots lie in (-B, B].
inline Rat root_bound(const IntPoly& f) {
    if (f.degree() < 1) throw std::invalid_argument("root_bound: constant polynomial");
    Int mx = 0;
    for (int i = 0; i < f.degree(); ++i) mx = std::max(mx, Int(abs(f.coef[i])));
    return 1 + Rat(mx) / Rat(abs(f.coef.back()));
}

// Sturm chain via negated pseudo-remainders with positive scaling.
inline std::vector<IntPoly> sturm_chain(const IntPoly& f0) {
    std::vector<IntPoly> chain;
    IntPoly f = f0;
    f.normalize_content();
    chain.push_back(f);
    IntPoly g = f.derivative();
    g.normalize_content();
    while (!g.is_zero()) {
        chain.push_back(g);
        // r = -(lc(g)^2k * f mod g), scaled by a positive square so signs at
        // any evaluation point are those of the rational remainder
        IntPoly a = f;
        Int lc = g.coef.back();
        Int lc2 = lc * lc;
        while (a.degree() >= g.degree() && !a.is_zero()) {
            Int q = a.coef.back() * lc;  // (a_lead/lc) * lc^2 = a_lead * lc
            int shift = a.degree() - g.degree();
            for (auto& c : a.coef) c *= lc2;
            for (int i = 0; i <= g.degree(); ++i)
                a.coef[shift + i] -= q * g.coef[i];
            a.trim();
        }
        for (auto& c : a.coef) c = -c;
        a.normalize_content();
        f = g;
        g = a;
    }
    return chain;
}

inline int sign_variations(const std::vector<IntPoly>& chain, const Rat& x) {
    int vars = 0, prev = 0;
    for (const auto& f : chain) {
        int s = f.sign_at(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

// Number of distinct real roots in the half-open interval (a, b].
inline int roots_in(const std::vector<IntPoly>& chain, const Rat& a, const Rat& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

struct RootInterval {
    Rat lo, hi;      // root lies in (lo, hi], or at lo == hi when exact
    bool exact = false;

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
};

// Isolating intervals for all distinct real roots, in increasing order.
// The input must be squarefree (the chain ends in a nonzero constant).
// Invariant: segment endpoints are never roots, so every non-exact interval
// has a sign change across it.
inline std::vector<RootInterval> isolate_real_roots(const IntPoly& f) {
    if (f.degree() < 1) return {};
    auto chain = sturm_chain(f);
    if (chain.back().degree() > 0)
        throw std::invalid_argument("isolate_real_roots: polynomial has repeated roots");

    std::vector<RootInterval> out;
    Rat B = root_bound(f);
    struct Seg {
        Rat a, b;
        int count;
    };
    std::vector<Seg> stack{{-B, B, roots_in(chain, -B, B)}};
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 0) continue;
        if (s.count == 1) {
            out.push_back({s.a, s.b, false});
            continue;
        }
        Rat m = (s.a + s.b) / 2;
        if (f.sign_at(m) == 0) {
            out.push_back({m, m, true});
            // move the split points off the root; shrink until the slivers
            // around m contain no other root
            Rat d = (s.b - s.a) / 4;
            while (roots_in(chain, m - d, m) != 1 || roots_in(chain, m, m + d) != 0) d /= 2;
            stack.push_back({m + d, s.b, roots_in(chain, m + d, s.b)});
            stack.push_back({s.a, m - d, roots_in(chain, s.a, m - d)});
            continue;
        }
        int left = roots_in(chain, s.a, m);
        stack.push_back({m, s.b, s.count - left});  // pushed first: processed last
        stack.push_back({s.a, m, left});
    }
    std::sort(out.begin(), out.end(),
              [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    return out;
}

// Shrink an isolating interval by bisection until its width is <= target.
inline void refine_root(const IntPoly& f, RootInterval& iv, const Rat& target_width) {
    if (iv.exact) return;
    int sa = f.sign_at(iv.lo);
    if (sa == 0) {
        iv = {iv.lo, iv.lo, true};
        return;
    }
    while (iv.width() > target_width) {
        Rat m = iv.mid();
        int sm = f.sign_at(m);
        if (sm == 0) {
            iv = {m, m, true};
            return;
        }
        if (sm == sa) iv.lo = m;
        else iv.hi = m;
    }
}

}  // namespace tamlab

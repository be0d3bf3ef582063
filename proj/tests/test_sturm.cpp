#include <random>

#include "doctest.h"
#include "tamlab/sturm.hpp"

using namespace tamlab;

namespace {

IntPoly cubic(long a4, long a6) { return IntPoly::from({Int(a6), Int(a4), Int(0), Int(1)}); }

}  // namespace

TEST_CASE("root counts of depressed cubics") {
    // x^3 - 3x + 1: three real roots
    auto r3 = isolate_real_roots(cubic(-3, 1));
    CHECK(r3.size() == 3);
    CHECK(r3[0].hi <= r3[1].lo);
    CHECK(r3[1].hi <= r3[2].lo);
    // x^3 + x + 1: one real root
    CHECK(isolate_real_roots(cubic(1, 1)).size() == 1);
    // x^3 - x: exact integer roots -1, 0, 1
    auto rx = isolate_real_roots(IntPoly::from({Int(0), Int(-1), Int(0), Int(1)}));
    REQUIRE(rx.size() == 3);
    for (const auto& iv : rx) {
        CHECK(iv.lo <= iv.hi);
    }
}

TEST_CASE("intervals really contain a sign change or an exact root") {
    std::mt19937 rng(7);
    IntPoly f;
    for (int trial = 0; trial < 200; ++trial) {
        long a4 = static_cast<long>(rng() % 41) - 20;
        long a6 = static_cast<long>(rng() % 41) - 20;
        if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;  // repeated roots
        f = cubic(a4, a6);
        auto roots = isolate_real_roots(f);
        CHECK((roots.size() == 1 || roots.size() == 3));
        // discriminant sign decides the number of real roots
        bool three = 4 * a4 * a4 * a4 + 27 * a6 * a6 < 0;
        CHECK(roots.size() == (three ? 3u : 1u));
        for (auto iv : roots) {
            if (iv.exact) {
                CHECK(f.eval(iv.lo) == 0);
            } else {
                CHECK(f.sign_at(iv.lo) * f.sign_at(iv.hi) < 0);
            }
            refine_root(f, iv, Rat(1, 1 << 20));
            CHECK(iv.width() <= Rat(1, 1 << 20));
            if (!iv.exact) CHECK(f.sign_at(iv.lo) * f.sign_at(iv.hi) < 0);
        }
    }
}

TEST_CASE("refinement never loses the root") {
    IntPoly f = cubic(-2, 1);  // roots 1, (-1 +- sqrt(5))/2
    auto roots = isolate_real_roots(f);
    REQUIRE(roots.size() == 3);
    // golden-ratio root near 0.618...
    auto iv = roots[1];
    refine_root(f, iv, Rat(1, 1'000'000));
    Rat phi_lo(618033, 1000000), phi_hi(618034, 1000000);
    CHECK(iv.hi >= phi_lo);
    CHECK(iv.lo <= phi_hi);
}

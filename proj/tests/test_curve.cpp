#include "doctest.h"
#include "tamlab/curve.hpp"

using namespace tamlab;

TEST_CASE("discriminant of short models") {
    CHECK(Curve(-3, -4).discriminant() == -5184);
    CHECK(Curve(0, 1).discriminant() == -432);
    CHECK_THROWS_AS(Curve(-3, 2), std::invalid_argument);  // 4(-3)^3 + 27*4 = 0
    CHECK_THROWS_AS(Curve(0, 0), std::invalid_argument);
}

TEST_CASE("height of short models") {
    CHECK(Curve(-3, -4).height() == 432);
    CHECK(Curve(1, 0).height() == 4);
    CHECK(Curve(0, 1).height() == 27);
}

TEST_CASE("enumeration by height") {
    CHECK(enumerate_curves(HeightBound(Int(0))).empty());

    // X = 27: a4, a6 in {-1,0,1} minus the singular pair (0,0)
    auto small = enumerate_curves(HeightBound(Int(27)));
    CHECK(small.size() == 8);
    for (const auto& c : small) {
        CHECK(c.height() <= 27);
        CHECK(c.height() >= 1);
        CHECK(c.discriminant() != 0);
    }

    // determinism: two runs yield identical sequences
    auto again = enumerate_curves(HeightBound(Int(27)));
    CHECK(small == again);
}

TEST_CASE("enumeration matches the height predicate") {
    HeightBound b{Int(500)};
    auto curves = enumerate_curves(b);
    // every enumerated curve is in range, and the count matches a direct scan
    std::size_t direct = 0;
    for (int a4 = -10; a4 <= 10; ++a4)
        for (int a6 = -10; a6 <= 10; ++a6) {
            if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;
            Curve c{a4, a6};
            if (c.height() <= 500) {
                ++direct;
                CHECK(b.contains(c));
            }
        }
    CHECK(curves.size() == direct);
    for (const auto& c : curves) CHECK(abs(c.discriminant()) <= 32 * b.X);
}

TEST_CASE("range splitting recombines to the full enumeration") {
    HeightBound b{Int(2000)};
    auto whole = enumerate_curves(b);
    std::vector<Curve> parts;
    Int lim = b.a4_limit();
    Int mid = -lim + (2 * lim) / 3;
    for_each_curve_in_range(b, -lim, mid, [&](const Curve& c) { parts.push_back(c); });
    for_each_curve_in_range(b, mid + 1, lim, [&](const Curve& c) { parts.push_back(c); });
    CHECK(whole == parts);
}

TEST_CASE("long model embedding preserves the discriminant") {
    for (int a4 = -6; a4 <= 6; ++a4)
        for (int a6 = -6; a6 <= 6; ++a6) {
            if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;
            Curve c{a4, a6};
            LongModel m = to_long_model(c);
            CHECK(m.a1 == 0);
            CHECK(m.discriminant() == c.discriminant());
        }
}

TEST_CASE("model transformation scales the discriminant by u^12") {
    LongModel m{1, -2, 3, -4, 5};
    Int disc = m.discriminant();
    LongModel shifted = m.transformed(1, 7, -3, 11);
    CHECK(shifted.discriminant() == disc);
    LongModel doubled = shifted.transformed(1, -7, 3, -11);
    CHECK(doubled.discriminant() == disc);
}

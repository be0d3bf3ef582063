#include "doctest.h"
#include <random>
#include "tamlab/tate.hpp"

using namespace tamlab;

namespace {

void check_agree(const Curve& c, const Int& p) {
    auto fast = classify(c, p);
    auto ref = generic_tate(to_long_model(c), p);
    INFO("a4=", c.a4().get_str(), " a6=", c.a6().get_str(), " p=", p.get_str());
    CHECK(to_string(fast.kodaira) == to_string(ref.kodaira));
    CHECK(fast.cp == ref.cp);
    CHECK(fast.min_disc_valuation == ref.min_disc_valuation);
}

}  // namespace

TEST_CASE("epsilon parity") {
    CHECK(epsilon(3) == 1);
    CHECK(epsilon(4) == 2);
    for (std::uint64_t n = 1; n <= 100; ++n) {
        CHECK((epsilon(n) == 1 || epsilon(n) == 2));
        CHECK(epsilon(n) == ((n % 2) ? 1u : 2u));
    }
}

TEST_CASE("kodaira string grammar round-trips") {
    for (auto k : {KodairaType::I0(), KodairaType::In(7), KodairaType::II(), KodairaType::III(),
                   KodairaType::IV(), KodairaType::I0star(), KodairaType::Instar(2),
                   KodairaType::IVstar(), KodairaType::IIIstar(), KodairaType::IIstar()}) {
        CHECK(kodaira_from_string(to_string(k)) == k);
    }
    CHECK(to_string(KodairaType::In(12)) == "In:12");
    CHECK(to_string(KodairaType::Instar(1)) == "In*:1");
}

TEST_CASE("tate data at p = 5") {
    Curve c{-3, 27};
    auto td = tate_data(c, 5);
    CHECK(td.alpha4 == PadicVal{true, 0});
    CHECK(td.alpha6 == PadicVal{true, 0});
    CHECK(td.d == 2);
    REQUIRE(td.has_st);
    CHECK(mod_reduce(td.t, 5) == 1);
    CHECK(mod_reduce(td.s, 5) == 1);  // (27 - 2) / 25

    auto good = tate_data(Curve{0, 1}, 5);
    CHECK(good.alpha4.is_infinite());
    CHECK(good.alpha6 == PadicVal{true, 0});
    CHECK(good.d == 0);
    CHECK(!good.has_st);

    CHECK_THROWS_AS(tate_data(c, 6), std::invalid_argument);
}

TEST_CASE("tate data at p = 2 in the unit regime") {
    // a4 = -3t^2 with t = 3 and a6 = 2t^3 + 2^6: class (5,6) mod 8, d = 12
    Curve c{-27, 118};
    CHECK(valuation(c.discriminant(), 2) == PadicVal{true, 12});
    auto td = tate_data(c, 2);
    REQUIRE(td.has_vk);
    CHECK(td.v == 8);  // d even: v = 2^((d-6)/2)
    CHECK(mod_reduce(td.t, 4) == 3);
    // round-trip: a6 = 2t^3 - 2vt + v^2 + 2^k s to working precision
    Int rhs = 2 * td.t * td.t * td.t - 2 * td.v * td.t + td.v * td.v;
    REQUIRE(td.k.finite);
    rhs += pow_int(2, td.k.v) * td.s;
    CHECK(mod_reduce(c.a6() - rhs, pow_int(2, 14)) == 0);
}

TEST_CASE("short-model minimality via the valuation criteria") {
    CHECK(!is_short_minimal(Curve{625, 15625}, 5));  // p^4, p^6
    CHECK(is_short_minimal(Curve{-3, -4}, 2));
    CHECK(!is_short_minimal(Curve{16, 16}, 2));      // a6 = 16 mod 64
    CHECK(!is_short_minimal(Curve{-27, 118}, 2));    // (5,6) mod 8, d = 12
    CHECK(is_short_minimal(Curve{-27, 86}, 2));      // (5,6) mod 8 but d = 11
    CHECK(!is_short_minimal(Curve{-27, 783}, 3));    // alpha4 = alpha6 = 3, d = 12
    CHECK(is_short_minimal(Curve{27, 27}, 3));       // d = 9 here
}

TEST_CASE("classification of pinned examples") {
    SUBCASE("good reduction") {
        auto r = classify(Curve{0, 1}, 5);
        CHECK(r.kodaira == KodairaType::I0());
        CHECK(r.cp == 1);
        CHECK(r.short_minimal);
        CHECK(r.min_disc_valuation == 0);
    }
    SUBCASE("multiplicative I_2 at 5") {
        auto r = classify(Curve{-3, 27}, 5);
        CHECK(r.kodaira == KodairaType::In(2));
        CHECK(r.cp == 2);
        check_agree(Curve{-3, 27}, 5);
    }
    SUBCASE("I_0* at 5 with the cubic T^3 + 2T + 1") {
        // alpha4 = 2, alpha6 = 3, d = 6; count roots by brute force
        Curve c{50, 125};
        int roots = 0;
        for (int t = 0; t < 5; ++t)
            if ((t * t * t + 2 * t + 1) % 5 == 0) ++roots;
        CHECK(roots == 0);
        auto r = classify(c, 5);
        CHECK(r.kodaira == KodairaType::I0star());
        CHECK(r.cp == static_cast<std::uint64_t>(1 + roots));
        check_agree(c, 5);
    }
    SUBCASE("I_1* at 5 via the unit parameters") {
        // a4 = -3*25, a6 = 2*125 + 5^4: d = 7, n = 1, s = 1 a residue
        Curve c{-75, 875};
        auto r = classify(c, 5);
        CHECK(r.kodaira == KodairaType::Instar(1));
        CHECK(r.cp == 4);
        check_agree(c, 5);
    }
    SUBCASE("Tamagawa-trivial curve") {
        CHECK(classify(Curve{-3, -4}, 2).cp == 1);
        CHECK(classify(Curve{-3, -4}, 3).cp == 1);
        CHECK(tamagawa_product(Curve{-3, -4}) == 1);
    }
    SUBCASE("y^2 = x^3 + 1") {
        auto at2 = classify(Curve{0, 1}, 2);
        CHECK(at2.kodaira == KodairaType::IV());
        CHECK(at2.cp == 3);
        auto at3 = classify(Curve{0, 1}, 3);
        CHECK(at3.kodaira == KodairaType::III());
        CHECK(at3.cp == 2);
        CHECK(tamagawa_product(Curve{0, 1}) == 6);
        check_agree(Curve{0, 1}, 2);
        check_agree(Curve{0, 1}, 3);
    }
    SUBCASE("prime discriminant cofactor gives I_1") {
        // disc(1,1) = -496 = -2^4 * 31
        auto r31 = classify(Curve{1, 1}, 31);
        CHECK(r31.kodaira == KodairaType::In(1));
        CHECK(r31.cp == 1);
        CHECK(tamagawa_product(Curve{1, 1}) == classify(Curve{1, 1}, 2).cp);
        check_agree(Curve{1, 1}, 31);
    }
    SUBCASE("non-minimal input is rescaled") {
        // (5^4, 5^6) rescales to (1, 1)
        auto r = classify(Curve{625, 15625}, 5);
        CHECK(r.rescalings == 1);
        CHECK(!r.short_minimal);
        CHECK(r.kodaira == classify(Curve{1, 1}, 5).kodaira);
        check_agree(Curve{625, 15625}, 5);
    }
    SUBCASE("starred reduction at 2: (5,6) mod 8 with d = 12") {
        Curve c{-27, 118};
        auto r = classify(c, 2);
        CHECK(r.kodaira == KodairaType::I0());
        CHECK(r.cp == 1);
        CHECK(!r.short_minimal);
        CHECK(r.min_disc_valuation == 0);
        check_agree(c, 2);
    }
    SUBCASE("starred reduction at 2: d > 12 gives I_n") {
        // a4 = -27, a6 = 54 + 2^7: d = 13, n = 1
        Curve c{-27, 182};
        CHECK(valuation(c.discriminant(), 2) == PadicVal{true, 13});
        auto r = classify(c, 2);
        CHECK(r.kodaira == KodairaType::In(1));
        check_agree(c, 2);
    }
    SUBCASE("starred reduction at 3") {
        // a4 = -27 t^2, a6 = 54 t^3 + 3^(d-6) s: t = 1, d = 12
        Curve c{-27, 54 + 729};
        CHECK(valuation(c.discriminant(), 3) == PadicVal{true, 12});
        auto r = classify(c, 3);
        CHECK(r.kodaira == KodairaType::I0());
        CHECK(r.cp == 1);
        CHECK(!r.short_minimal);
        check_agree(c, 3);
    }
}

TEST_CASE("generic algorithm on long models") {
    auto r3 = generic_tate(LongModel{0, 0, 0, -3, -4}, 3);
    CHECK(r3.cp == 1);
    auto r2 = generic_tate(LongModel{0, 0, 0, 0, 1}, 2);
    CHECK(r2.kodaira == KodairaType::IV());
    CHECK(r2.cp == classify(Curve{0, 1}, 2).cp);
    // a model with a1 odd: multiplicative at 2 (e.g. y^2 + xy = x^3 - x^2 - 2x + 2)
    LongModel m{1, -1, 0, -2, 2};
    Int disc = m.discriminant();
    CHECK(disc != 0);
    auto v2 = valuation(disc, 2);
    if (v2.finite && v2.v > 0) {
        auto r = generic_tate(m, 2);
        CHECK(cp_admissible(r.kodaira, r.cp));
    }
}

TEST_CASE("classifier agrees with the generic algorithm up to height 2500") {
    std::size_t checked = 0;
    for_each_curve(HeightBound(Int(2500)), [&](const Curve& c) {
        for (const auto& [p, e] : factor_integer(c.discriminant())) {
            (void)e;
            check_agree(c, p);
            auto r = classify(c, p);
            CHECK(cp_admissible(r.kodaira, r.cp));
            // minimality consistency with the direct criterion
            CHECK(is_short_minimal(c, p) == r.short_minimal);
            CHECK(r.rescalings * 12 <= valuation(c.discriminant(), p).v);
            ++checked;
        }
    });
    CHECK(checked > 500);
}

TEST_CASE("multiplicative reduction matches the Legendre-symbol rule") {
    // for p >= 5 and type I_n: c_p = n when (3t|p) = 1, else epsilon(n)
    for (const Int& p : {Int(5), Int(7), Int(13)}) {
        for (int tt = 1; tt < 5; ++tt) {
            for (int d = 1; d <= 4; ++d) {
                for (int s = 1; s <= 2; ++s) {
                    Int t{tt};
                    Int a4 = -3 * t * t;
                    Int a6 = 2 * t * t * t + pow_int(p, d) * s;
                    if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;
                    Curve c{a4, a6};
                    auto dv = valuation(c.discriminant(), p);
                    if (!dv.equals(static_cast<std::uint64_t>(d))) continue;
                    auto r = classify(c, p);
                    REQUIRE(r.kodaira == KodairaType::In(d));
                    std::uint64_t expect =
                        legendre(3 * t, p) == 1 ? static_cast<std::uint64_t>(d) : epsilon(d);
                    CHECK(r.cp == expect);
                    check_agree(c, p);
                }
            }
        }
    }
}

TEST_CASE("iterated rescaling stacks with the starred reductions") {
    // (p^4 a4, p^6 a6) over a base that itself reduces out of short form
    SUBCASE("p = 2") {
        Curve base{-27, 118};  // (5,6) mod 8, d = 12: reduces to good reduction
        Curve big{base.a4() * 16, base.a6() * 64};
        auto r = classify(big, 2);
        CHECK(r.rescalings == 1);
        CHECK(!r.short_minimal);
        CHECK(r.kodaira == KodairaType::I0());
        CHECK(r.min_disc_valuation == 0);
        auto ref = generic_tate(to_long_model(big), 2);
        CHECK(r.kodaira == ref.kodaira);
        CHECK(r.cp == ref.cp);
        CHECK(r.min_disc_valuation == ref.min_disc_valuation);
    }
    SUBCASE("p = 3") {
        Curve base{-27, 783};  // alpha4 = alpha6 = 3, d = 12
        Curve big{base.a4() * 81, base.a6() * 729};
        auto r = classify(big, 3);
        CHECK(r.rescalings == 1);
        CHECK(!r.short_minimal);
        CHECK(r.kodaira == KodairaType::I0());
        auto ref = generic_tate(to_long_model(big), 3);
        CHECK(r.cp == ref.cp);
        CHECK(r.min_disc_valuation == ref.min_disc_valuation);
    }
    SUBCASE("two rescaling passes at p = 5") {
        Curve big{pow_int(5, 8) * 2, pow_int(5, 12) * 3};
        auto r = classify(big, 5);
        CHECK(r.rescalings == 2);
        CHECK(!r.short_minimal);
        auto ref = generic_tate(to_long_model(big), 5);
        CHECK(r.kodaira == ref.kodaira);
        CHECK(r.cp == ref.cp);
        CHECK(r.min_disc_valuation == ref.min_disc_valuation);
    }
    SUBCASE("d = 10 family at p = 3 is IV* with both component counts") {
        // s = 1 mod 3 gives c = 3; s = -1 mod 3 gives c = 1
        auto r1 = classify(Curve{-27, 135}, 3);   // a6 = 54 + 81
        CHECK(r1.kodaira == KodairaType::IVstar());
        CHECK(r1.cp == 3);
        auto r2 = classify(Curve{-27, -135}, 3);  // mirrored sign
        CHECK(r2.kodaira == KodairaType::IVstar());
        CHECK(r2.cp == 1);
        for (const auto& c : {Curve{-27, 135}, Curve{-27, -135}}) {
            auto ref = generic_tate(to_long_model(c), 3);
            auto fast = classify(c, 3);
            CHECK(fast.kodaira == ref.kodaira);
            CHECK(fast.cp == ref.cp);
        }
    }
}

TEST_CASE("randomized deep-valuation agreement with the general algorithm") {
    std::mt19937_64 rng(424242);
    long checked = 0;
    for (const Int& p : {Int(2), Int(3), Int(5), Int(7)}) {
        for (int trial = 0; trial < 2000; ++trial) {
            unsigned i = rng() % 11, j = rng() % 15;
            Int u = Int(rng() % (1 << 20)) - (1 << 19);
            Int w = Int(rng() % (1 << 20)) - (1 << 19);
            Int a4 = pow_int(p, i) * u, a6 = pow_int(p, j) * w;
            if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;
            Curve c{a4, a6};
            auto fast = classify(c, p);
            auto ref = generic_tate(to_long_model(c), p);
            INFO("p=", p.get_str(), " a4=", a4.get_str(), " a6=", a6.get_str());
            CHECK(fast.kodaira == ref.kodaira);
            CHECK(fast.cp == ref.cp);
            CHECK(fast.min_disc_valuation == ref.min_disc_valuation);
            CHECK(fast.short_minimal == ref.short_minimal);
            CHECK(fast.short_minimal == is_short_minimal(c, p));
            CHECK(cp_admissible(fast.kodaira, fast.cp));
            CHECK((fast.kodaira == KodairaType::I0()) == (fast.min_disc_valuation == 0));
            ++checked;
        }
    }
    CHECK(checked > 7000);
}

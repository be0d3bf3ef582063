#include "doctest.h"
#include "tamlab/census.hpp"
#include <cmath>
#include "tamlab/densities.hpp"

using namespace tamlab;

TEST_CASE("discriminant factorization") {
    auto f1 = factor_discriminant(Int(-5184));
    REQUIRE(f1.size() == 2);
    CHECK(f1[0] == std::pair<Int, unsigned>{2, 6});
    CHECK(f1[1] == std::pair<Int, unsigned>{3, 4});
    auto f2 = factor_discriminant(Int(-432));
    REQUIRE(f2.size() == 2);
    CHECK(f2[0] == std::pair<Int, unsigned>{2, 4});
    CHECK(f2[1] == std::pair<Int, unsigned>{3, 3});
    CHECK_THROWS_AS(factor_discriminant(Int(0)), std::invalid_argument);

    // product of prime powers reconstructs the absolute value
    for (long n : {-97L, 360L, -123456L, 1000003L, 4096L}) {
        Int prod = 1;
        for (const auto& [p, e] : factor_discriminant(Int(n))) prod *= pow_int(p, e);
        CHECK(prod == abs(Int(n)));
    }
}

TEST_CASE("hand-checkable census at X = 27") {
    auto r = run_census(Int(27));
    CHECK(r.n_total == 8);

    // recompute everything directly from the oracle
    std::uint64_t n = 0, nmin = 0, nconv = 0;
    Int stam = 0;
    std::map<std::uint64_t, std::uint64_t> hist;
    for_each_curve(HeightBound(Int(27)), [&](const Curve& c) {
        ++n;
        Int tam = 1;
        bool minimal = true;
        for (const auto& [p, e] : factor_discriminant(c.discriminant())) {
            (void)e;
            auto lr = generic_tate(to_long_model(c), p);
            tam *= lr.cp;
            minimal = minimal && lr.short_minimal;
        }
        stam += tam;
        ++hist[to_u64(tam)];
        if (minimal) {
            ++nmin;
            if (tam == 1 && convenient_geometry(c)) ++nconv;
        }
    });
    CHECK(n == r.n_total);
    CHECK(stam == r.s_tam);
    CHECK(nmin == r.n_minimal);
    CHECK(nconv == r.n_convenient);
    CHECK(hist == r.tam_histogram);
}

TEST_CASE("census invariants at X = 20000") {
    CensusOptions opts;
    opts.shards = 4;
    opts.sample_oracle_rate = 0.05;
    auto r = run_census(Int(20000), opts);

    std::uint64_t total = r.tam_overflow;
    Int weighted = 0;
    for (const auto& [m, k] : r.tam_histogram) {
        total += k;
        weighted += Int(m) * Int(k);
    }
    CHECK(total == r.n_total);
    CHECK(weighted == r.s_tam);  // no overflow bucket at this scale
    CHECK(r.tam_overflow == 0);
    CHECK(r.n_minimal <= r.n_total);
    CHECK(r.n_convenient <= r.count(1));
    CHECK(r.oracle_checked > 0);
    CHECK(r.oracle_mismatches == 0);

    // independent curve count
    std::uint64_t direct = 0;
    for (long a4 = -18; a4 <= 18; ++a4)
        for (long a6 = -27; a6 <= 27; ++a6) {
            if (4 * a4 * a4 * a4 + 27 * a6 * a6 == 0) continue;
            long h4 = 4 * std::abs(a4) * a4 * a4, h6 = 27 * a6 * a6;
            if (std::max(h4, h6) <= 20000) ++direct;
        }
    CHECK(direct == r.n_total);
}

TEST_CASE("shard-count independence and determinism") {
    auto strip = [](CensusResult r) {
        r.wall_seconds = 0;
        r.shard_count = 0;
        return r;
    };
    auto eq = [&](const CensusResult& a, const CensusResult& b) {
        return a.n_total == b.n_total && a.tam_histogram == b.tam_histogram &&
               a.s_tam == b.s_tam && a.n_minimal == b.n_minimal &&
               a.n_convenient == b.n_convenient && a.tam_overflow == b.tam_overflow;
    };
    CensusOptions one, three, seven;
    one.shards = 1;
    three.shards = 3;
    seven.shards = 7;
    auto a = strip(run_census(Int(15000), one));
    auto b = strip(run_census(Int(15000), three));
    auto c = strip(run_census(Int(15000), seven));
    auto d = strip(run_census(Int(15000), three));
    CHECK(eq(a, b));
    CHECK(eq(b, c));
    CHECK(eq(b, d));
    CHECK(b.n_total > 0);
}

TEST_CASE("empirical type frequencies match the exact tables at X = 10^6") {
    // for p >= 5 every (K, c) with delta' >= p^-7 must sit within 5 binomial
    // standard deviations of its exact density among curves of ht <= 10^6
    const long ps[] = {5, 7, 11, 13};
    std::map<std::string, std::uint64_t> hist;
    std::map<long, std::uint64_t> bad_count;
    std::uint64_t N = 0;
    for_each_curve(HeightBound(Int(1000000)), [&](const Curve& c) {
        ++N;
        Int disc_part = 4 * c.a4() * c.a4() * c.a4() + 27 * c.a6() * c.a6();
        for (long p : ps) {
            Int P(p);
            if (mod_reduce(disc_part, P) != 0) continue;  // good reduction
            ++bad_count[p];
            auto r = classify(c, P);
            if (!r.short_minimal) continue;  // the tables count p-minimal curves
            ++hist[std::to_string(p) + "|" + to_string(r.kodaira) + "|" +
                   std::to_string(r.cp)];
        }
    });
    REQUIRE(N == 48116);

    for (long p : ps) {
        Int P(p);
        auto check_row = [&](const KodairaType& k, std::uint64_t c) {
            Rat dp = delta_prime(P, k, c);
            Rat threshold = rat_pow(Rat(1, P), 7);
            if (dp < threshold || dp == 0) return;
            double exp_count = mpq_get_d(dp.get_mpq_t()) * static_cast<double>(N);
            double sigma = std::sqrt(exp_count * (1.0 - mpq_get_d(dp.get_mpq_t())));
            double obs;
            if (k.family == KodairaFamily::I0) {
                obs = static_cast<double>(N - bad_count[p]);
            } else {
                auto it = hist.find(std::to_string(p) + "|" + to_string(k) + "|" +
                                    std::to_string(c));
                obs = it == hist.end() ? 0.0 : static_cast<double>(it->second);
            }
            INFO("p=", p, " K=", to_string(k), " c=", c, " obs=", obs, " exp=", exp_count);
            CHECK(std::abs(obs - exp_count) <= 5.0 * sigma + 1e-9);
        };
        check_row(KodairaType::I0(), 1);
        for (std::uint64_t n = 1; n <= 8; ++n) {
            check_row(KodairaType::In(n), n);
            if (epsilon(n) != n) check_row(KodairaType::In(n), epsilon(n));
            check_row(KodairaType::Instar(n), 2);
            check_row(KodairaType::Instar(n), 4);
        }
        check_row(KodairaType::II(), 1);
        check_row(KodairaType::III(), 2);
        check_row(KodairaType::IV(), 1);
        check_row(KodairaType::IV(), 3);
        for (std::uint64_t c : {1, 2, 4}) check_row(KodairaType::I0star(), c);
        check_row(KodairaType::IVstar(), 1);
        check_row(KodairaType::IVstar(), 3);
        check_row(KodairaType::IIIstar(), 2);
        check_row(KodairaType::IIstar(), 1);
    }
}

TEST_CASE("N_1/N approaches its limit monotonically from 10^4 to 10^6") {
    double prev = 1.0;
    for (long X : {10000L, 100000L, 1000000L}) {
        CensusOptions opts;
        opts.shards = 8;
        auto r = run_census(Int(X), opts);
        double dist = std::abs(static_cast<double>(r.count(1)) /
                                   static_cast<double>(r.n_total) -
                               0.5053);
        CHECK(dist < prev);
        prev = dist;
    }
}

#include <cmath>

#include "doctest.h"
#include "tamlab/densities.hpp"

using namespace tamlab;

TEST_CASE("single table entries") {
    CHECK(delta_prime(7, KodairaType::I0(), 1) == Rat(6, 7));
    CHECK(delta_prime(3, KodairaType::IVstar(), 1) == make_rat(7, pow_int(3, 9)));
    CHECK(delta_prime(2, KodairaType::II(), 1) == Rat(1, 2));
    CHECK(delta_prime(2, KodairaType::In(4), 2) == 0);
    CHECK(delta_prime(5, KodairaType::In(2), 1) == 0);  // admissible but absent
    CHECK_THROWS_AS(delta_prime(5, KodairaType::II(), 2), std::domain_error);

    CHECK(delta_hat(2, KodairaType::I0(), 1) == Rat(1, 512));
    CHECK(delta_hat(3, KodairaType::In(2), 2) == make_rat(4, pow_int(3, 13)));
    CHECK(delta_hat(3, KodairaType::In(5), 5) == make_rat(2, pow_int(3, 16)));
    CHECK(delta_hat(2, KodairaType::In(4), 2) == make_rat(1, pow_int(2, 15)));
    CHECK_THROWS_AS(delta_hat(5, KodairaType::I0(), 1), std::domain_error);
}

TEST_CASE("total densities at p = 2 and p = 3") {
    CHECK(delta(2, 1) == Rat(241, 396));
    CHECK(delta(2, 2) == Rat(7495, 24552));
    CHECK(delta(2, 3) == Rat(1153, 16368));
    CHECK(delta(2, 4) == Rat(171, 10912));
    CHECK(delta(3, 1) == Rat(1924625, 2125728));
    CHECK(delta(3, 2) == Rat(510641, 6377184));
    CHECK(delta(3, 3) == Rat(7594, 597861));
    CHECK(delta(3, 4) == Rat(1193, 652212));
    // geometric families beyond c = 4
    CHECK(delta(2, 7) == make_rat(1, pow_int(2, 8) * 1023));
    for (std::uint64_t c = 5; c <= 9; ++c) {
        CHECK(delta(2, c) == make_rat(1, pow_int(2, c + 1) * 1023));
        CHECK(delta(3, c) == make_rat(1, pow_int(3, c + 1) * 29524));
    }
}

TEST_CASE("closed form equals the table sum for p >= 5") {
    // delta() itself asserts the two routes agree; spot-check a value too
    Rat d53 = delta(5, 3);
    CHECK(d53 == Rat(25) * Rat(626) / (Rat(2) * 6 * 406901));
    for (auto p : primes_up_to(97)) {
        if (p < 5) continue;
        for (std::uint64_t c = 1; c <= 4; ++c) CHECK_NOTHROW(delta(p, c));
    }
}

TEST_CASE("normalization: densities sum to 1 at every prime") {
    for (auto p : primes_up_to(100)) CHECK(delta_total(p) == 1);
}

TEST_CASE("bounds 1 - 1/p^2 < delta_p(1) < 1") {
    for (auto p : primes_up_to(10000)) {
        if (p < 5) continue;
        Rat d = detail::delta_closed_form(p, 1);
        Rat low = 1 - Rat(1, p) * Rat(1, p);
        CHECK(d > low);
        CHECK(d < 1);
    }
}

TEST_CASE("series values") {
    SUBCASE("P_Tam at small m") {
        auto p1 = p_tam(1, 100000);
        CHECK(p1.value >= 0.5053);
        CHECK(p1.value < 0.5054);
        CHECK(p1.error_bound < 1e-4);
        auto p5 = p_tam(5, 100000);
        CHECK(p5.value >= 7.98e-5);
        CHECK(p5.value < 7.99e-5);
        CHECK(p5.error_bound < 1e-7);
        auto p12 = p_tam(12, 100000);
        CHECK(p12.value >= 0.0015);
        CHECK(p12.value < 0.0016);
    }
    SUBCASE("prime-index coefficients match the direct formula") {
        // P_Tam(l) = sum_p delta_p(l) prod_{q != p} delta_q(1)
        const std::uint64_t ell = 3, cutoff = 2000;
        auto via_product = p_tam(ell, cutoff);
        qreal prod1 = 1;
        auto primes = primes_up_to(cutoff);
        for (auto p : primes) prod1 *= to_qreal(delta(p, 1));
        qreal direct = 0;
        for (auto p : primes)
            direct += prod1 / to_qreal(delta(p, 1)) * to_qreal(delta(p, ell));
        CHECK(std::abs(via_product.value - qd(direct)) < via_product.error_bound + 1e-9);
    }
    SUBCASE("stability under doubling the prime cutoff") {
        auto a = p_tam(2, 20000);
        auto b = p_tam(2, 40000);
        CHECK(std::abs(a.value - b.value) < a.error_bound);
    }
    SUBCASE("L_Tam(0) is the total probability") {
        auto t = l_tam(0.0, 20000, 48);
        CHECK(std::abs(t.value - 1.0) < t.error_bound + 1e-4);
    }
    SUBCASE("rejects uncertified arguments") {
        CHECK_THROWS_AS(l_tam(-1.5, 1000, 16), std::domain_error);
        CHECK_THROWS_AS(p_tam(0), std::invalid_argument);
    }
}

TEST_CASE("density constants") {
    auto dc = density_constants();
    CHECK(dc.rho_pi10_coefficient == Rat(Int("21342914775"), Int(228811)));
    CHECK(dc.rho > 0.9960);
    CHECK(dc.rho < 0.9961);
    CHECK(dc.kappa1 == Rat(3, 20));
    CHECK(dc.kappa2 == doctest::Approx(3 * std::sqrt(6.0) / 40).epsilon(1e-12));

    // direct evaluation of prod_{5 <= p <= 10^4} (1 - p^-10) against the
    // zeta(10) route, to 1e-12
    qreal direct = 1;
    for (auto p : primes_up_to(10000)) {
        if (p < 5) continue;
        qreal q{static_cast<qreal>(p)};
        direct *= 1 - 1 / powq(q, 10);
    }
    qreal via_zeta = to_qreal(Rat(93555) * Rat(1024, 1023) * Rat(59049, 59048)) / powq(M_PIq, 10);
    CHECK(std::abs(qd(direct - via_zeta)) < 1e-12);
    CHECK(std::abs(qd(direct * to_qreal(Rat(255, 256) * Rat(19682, 19683))) - dc.rho) < 1e-12);
}

TEST_CASE("convenient-curve density constant") {
    auto cd = convenient_density(100000);
    CHECK(cd.value >= 0.1679);
    CHECK(cd.value < 0.1680);
    // closed form 12805748865 (2 + sqrt 6) / (1830488 pi^10) * P_Tam(1)
    auto p1 = p_tam(1, 100000);
    qreal closed = to_qreal(Rat(Int("12805748865"), Int("1830488"))) *
                   (2 + sqrtq(6.0Q)) / powq(M_PIq, 10) * static_cast<qreal>(p1.value);
    CHECK(std::abs(cd.value / qd(closed) - 1.0) < 1e-10);
}

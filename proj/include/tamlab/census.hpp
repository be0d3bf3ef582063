#pragma once

// Exhaustive curve census: enumerate all short models of height <= X,
// classify them at their bad primes, and aggregate the counters
//   N(X), N_m(X), S_Tam(X), N_min(X), N_c(X).
// Sharding is by contiguous a4 intervals; shard results merge by
// componentwise addition in shard order, so the outcome is independent of
// the shard count and thread schedule.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <thread>
#include <vector>

#include "tamlab/curve.hpp"
#include "tamlab/heights.hpp"
#include "tamlab/tate.hpp"

namespace tamlab {

struct CensusOptions {
    std::uint64_t shards = 1;
    std::uint64_t threads = 0;        // 0 = hardware concurrency
    std::uint64_t tam_ceiling = 1000000;
    double sample_oracle_rate = 0.0;  // fraction of curves re-checked against generic_tate
};

struct CensusResult {
    Int X;
    std::uint64_t n_total = 0;                         // N(X)
    std::map<std::uint64_t, std::uint64_t> tam_histogram;  // m -> N_m(X), m <= ceiling
    std::uint64_t tam_overflow = 0;                    // curves with Tam > ceiling
    Int s_tam;                                         // S_Tam(X), exact
    std::uint64_t n_minimal = 0;                       // N_min(X)
    std::uint64_t n_convenient = 0;                    // N_c(X)
    double wall_seconds = 0;
    std::uint64_t shard_count = 1;
    std::uint64_t oracle_checked = 0;
    std::uint64_t oracle_mismatches = 0;

    std::uint64_t count(std::uint64_t m) const {
        auto it = tam_histogram.find(m);
        return it == tam_histogram.end() ? 0 : it->second;
    }

    void merge(const CensusResult& o) {
        n_total += o.n_total;
        for (const auto& [m, k] : o.tam_histogram) tam_histogram[m] += k;
        tam_overflow += o.tam_overflow;
        s_tam += o.s_tam;
        n_minimal += o.n_minimal;
        n_convenient += o.n_convenient;
        oracle_checked += o.oracle_checked;
        oracle_mismatches += o.oracle_mismatches;
    }
};

// Complete factorization of |delta| (trial division; the census itself uses
// the precomputed table path below).
inline std::vector<std::pair<Int, unsigned>> factor_discriminant(const Int& delta) {
    if (delta == 0) throw std::invalid_argument("factor_discriminant: zero discriminant");
    return factor_integer(delta);
}

namespace detail {

// deterministic per-curve hash for oracle sampling
inline std::uint64_t curve_hash(long a4, long a6) {
    std::uint64_t h = static_cast<std::uint64_t>(a4) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(a6) + 0x517cc1b727220a95ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    return h ^ (h >> 33);
}

inline CensusResult census_range(const HeightBound& bound, const Int& a4_lo, const Int& a4_hi,
                                 const std::vector<std::uint64_t>& primes,
                                 const CensusOptions& opts) {
    CensusResult r;
    r.X = bound.X;
    r.s_tam = 0;
    const std::uint64_t sample_threshold =
        static_cast<std::uint64_t>(opts.sample_oracle_rate * 4294967296.0);

    for_each_curve_in_range(bound, a4_lo, a4_hi, [&](const Curve& c) {
        ++r.n_total;
        long a4 = mpz_get_si(c.a4().get_mpz_t());
        long a6 = mpz_get_si(c.a6().get_mpz_t());
        // |4 a4^3 + 27 a6^2| <= 2X fits in 64 bits at every supported X
        std::uint64_t m = static_cast<std::uint64_t>(
            std::abs(4 * a4 * a4 * a4 + 27 * a6 * a6));

        Int tam = 1;
        bool minimal = true;
        bool two_done = false;
        auto apply_prime = [&](std::uint64_t p, unsigned e) {
            if (p == 2) two_done = true;
            if (p >= 5 && e == 1) return;  // v_p(disc) = 1: type I_1, c_p = 1, minimal
            auto lr = classify(c, Int(static_cast<unsigned long>(p)));
            tam *= lr.cp;
            minimal = minimal && lr.short_minimal;
        };
        std::uint64_t rest = m;
        for (auto p : primes) {
            if (p * p > rest) break;
            if (rest % p) continue;
            unsigned e = 0;
            do {
                rest /= p;
                ++e;
            } while (rest % p == 0);
            apply_prime(p, p == 2 ? e + 4 : e);  // disc = -16 m
        }
        if (rest > 1) apply_prime(rest, 1);
        if (!two_done) apply_prime(2, 4);  // v_2(disc) >= 4 always

        if (sample_threshold &&
            (curve_hash(a4, a6) & 0xffffffffULL) < sample_threshold) {
            ++r.oracle_checked;
            Int tam_ref = 1;
            for (const auto& [p, e] : factor_integer(c.discriminant())) {
                (void)e;
                tam_ref *= generic_tate(to_long_model(c), p).cp;
            }
            if (tam_ref != tam) ++r.oracle_mismatches;
        }

        r.s_tam += tam;
        if (tam <= static_cast<long>(opts.tam_ceiling)) ++r.tam_histogram[to_u64(tam)];
        else ++r.tam_overflow;
        if (minimal) {
            ++r.n_minimal;
            if (tam == 1 && convenient_geometry(c)) ++r.n_convenient;
        }
    });
    return r;
}

}  // namespace detail

inline CensusResult run_census(const Int& X, CensusOptions opts = {}) {
    if (X < 1) throw std::invalid_argument("run_census: X >= 1 required");
    if (X > Int("1000000000000")) throw std::invalid_argument("run_census: X above desk scale");
    if (opts.shards < 1) opts.shards = 1;
    std::uint64_t threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    if (threads < 1) threads = 1;

    auto start = std::chrono::steady_clock::now();
    HeightBound bound(X);
    auto primes = primes_up_to(to_u64(isqrt(32 * X)) + 1);

    Int lim = bound.a4_limit();
    Int span = 2 * lim + 1;
    std::uint64_t shards = opts.shards;
    if (Int(static_cast<unsigned long>(shards)) > span) shards = to_u64(span);

    std::vector<CensusResult> parts(shards);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::uint64_t i = next.fetch_add(1);
            if (i >= shards) return;
            Int lo = -lim + Int(span * i / shards);
            Int hi = -lim + Int(span * (i + 1) / shards) - 1;
            parts[i] = detail::census_range(bound, lo, hi, primes, opts);
        }
    };
    std::vector<std::thread> pool;
    for (std::uint64_t t = 1; t < std::min<std::uint64_t>(threads, shards); ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    CensusResult total;
    total.X = X;
    total.s_tam = 0;
    for (const auto& p : parts) total.merge(p);
    total.shard_count = shards;
    total.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return total;
}

}  // namespace tamlab

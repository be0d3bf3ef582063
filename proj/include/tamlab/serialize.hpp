#pragma once

// JSON and CSV encodings of the public types.  Curve coefficients are
// decimal strings so downstream consumers never overflow; the Kodaira
// string grammar ("I0", "In:<n>", ..., "II*") is part of the stable
// interface.

#include <string>

#include "json.hpp"
#include "tamlab/census.hpp"
#include "tamlab/densities.hpp"
#include "tamlab/heights.hpp"
#include "tamlab/tate.hpp"

namespace tamlab {

using json = nlohmann::ordered_json;

inline json to_json(const Curve& c) {
    return json{{"a4", c.a4().get_str()}, {"a6", c.a6().get_str()}};
}

inline Curve curve_from_json(const json& j) {
    return Curve{Int(j.at("a4").get<std::string>()), Int(j.at("a6").get<std::string>())};
}

inline json to_json(const LocalReduction& r) {
    return json{{"p", to_u64(r.p)},
                {"kodaira", to_string(r.kodaira)},
                {"cp", r.cp},
                {"minimal", r.short_minimal},
                {"rescalings", r.rescalings},
                {"vmin", r.min_disc_valuation}};
}

inline json to_json(const SeriesValue& s) {
    return json{{"value", s.value},
                {"error_bound", s.error_bound},
                {"prime_cutoff", s.prime_cutoff},
                {"coefficient_cutoff", s.coefficient_cutoff}};
}

inline json to_json(const HeightReport& r) {
    return json{{"naive_height", r.naive_height.get_str()},
                {"weil", r.weil},
                {"canonical", r.canonical},
                {"f_e", r.f_e_value},
                {"tail_bound", r.tail_bound},
                {"inequality_holds", r.inequality_holds},
                {"method", r.method == HeightMethod::LocalSum ? "local-sum" : "doubling-oracle"}};
}

inline json to_json(const RationalPoint& p) {
    return json{{"A", p.A.get_str()}, {"B", p.B.get_str()}, {"C", p.C.get_str()}};
}

inline json to_json(const ConvenientTest& t) {
    json roots = json::array();
    for (const auto& iv : t.roots)
        roots.push_back(json{{"lo", iv.lo.get_str()}, {"hi", iv.hi.get_str()}});
    std::string kind = t.kind == ConvenientKind::OneComponent    ? "one-component"
                       : t.kind == ConvenientKind::TwoComponent ? "two-component"
                                                                : "not-convenient";
    return json{{"convenient", t.convenient()},
                {"case", kind},
                {"component_count", t.component_count},
                {"a4_nonpositive", t.a4_nonpositive},
                {"tamagawa_trivial", t.tamagawa_trivial},
                {"globally_minimal", t.globally_minimal},
                {"geometry_ok", t.geometry_ok},
                {"boundary", t.boundary},
                {"t_bucket", t.t_bucket},
                {"roots", roots}};
}

inline json to_json(const CensusResult& r) {
    json hist = json::object();
    for (const auto& [m, k] : r.tam_histogram) hist[std::to_string(m)] = k;
    return json{{"X", r.X.get_str()},
                {"n_total", r.n_total},
                {"tam_histogram", hist},
                {"tam_overflow", r.tam_overflow},
                {"s_tam", r.s_tam.get_str()},
                {"n_minimal", r.n_minimal},
                {"n_convenient", r.n_convenient},
                {"wall_seconds", r.wall_seconds},
                {"shard_count", r.shard_count},
                {"oracle_checked", r.oracle_checked},
                {"oracle_mismatches", r.oracle_mismatches}};
}

// CSV rows (X, m, N_m, N, ratio) for the Tamagawa histogram
inline std::string census_csv(const CensusResult& r) {
    std::string out = "X,m,N_m,N,ratio\n";
    for (const auto& [m, k] : r.tam_histogram) {
        out += r.X.get_str() + "," + std::to_string(m) + "," + std::to_string(k) + "," +
               std::to_string(r.n_total) + "," +
               std::to_string(static_cast<double>(k) / static_cast<double>(r.n_total)) + "\n";
    }
    return out;
}

// CSV rows (m, P_Tam(m), error_bound)
inline std::string p_tam_csv(std::uint64_t m_max, std::uint64_t prime_cutoff) {
    std::string out = "m,p_tam,error_bound\n";
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        auto v = p_tam(m, prime_cutoff);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%llu,%.12g,%.3g\n",
                      static_cast<unsigned long long>(m), v.value, v.error_bound);
        out += buf;
    }
    return out;
}

// CSV rows (p, kodaira, c, value) of the local density tables, with the
// I_n families listed up to n_max
inline std::string delta_table_csv(const Int& p, std::uint64_t n_max = 10) {
    std::string out = "p,kodaira,c,delta_prime,delta_hat\n";
    auto row = [&](const KodairaType& k, std::uint64_t c) {
        Rat dp = delta_prime(p, k, c);
        Rat dh = (p == 2 || p == 3) ? delta_hat(p, k, c) : Rat(0);
        if (dp == 0 && dh == 0) return;
        out += p.get_str() + "," + to_string(k) + "," + std::to_string(c) + "," +
               dp.get_str() + "," + dh.get_str() + "\n";
    };
    row(KodairaType::I0(), 1);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        row(KodairaType::In(n), n);
        if (epsilon(n) != n) row(KodairaType::In(n), epsilon(n));
    }
    row(KodairaType::II(), 1);
    row(KodairaType::III(), 2);
    row(KodairaType::IV(), 1);
    row(KodairaType::IV(), 3);
    for (std::uint64_t c : {1, 2, 4}) row(KodairaType::I0star(), c);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        row(KodairaType::Instar(n), 2);
        row(KodairaType::Instar(n), 4);
    }
    row(KodairaType::IVstar(), 1);
    row(KodairaType::IVstar(), 3);
    row(KodairaType::IIIstar(), 2);
    row(KodairaType::IIstar(), 1);
    return out;
}

}  // namespace tamlab

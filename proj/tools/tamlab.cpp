// tamlab: local reduction data, Tamagawa densities, curve census, and
// height verification for short Weierstrass curves over Q.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tamlab/serialize.hpp"
#include "tamlab/verify.hpp"

namespace {

using namespace tamlab;

struct Config {
    std::uint64_t prime_cutoff = 100000;
    std::uint64_t c_cutoff = 64;
    std::uint64_t precision_bits = 113;
    std::uint64_t shards = 16;
    std::uint64_t threads = 0;
    std::uint64_t tam_ceiling = 1000000;
    std::string output_path;
    std::string output_format = "json";
};

void emit(const Config& cfg, const std::string& text) {
    if (cfg.output_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(cfg.output_path);
    if (!f) throw std::runtime_error("cannot open output file " + cfg.output_path);
    f << text << "\n";
}

Curve parse_curve(const std::string& a4, const std::string& a6) {
    return Curve{Int(a4), Int(a6)};
}

int cmd_local(const Config& cfg, const std::string& a4, const std::string& a6,
              const std::string& p_opt) {
    Curve c = parse_curve(a4, a6);
    json rows = json::array();
    Int tam = 1;
    if (!p_opt.empty()) {
        Int p(p_opt);
        if (!is_prime(p)) throw std::invalid_argument("p must be prime");
        auto r = classify(c, p);
        rows.push_back(to_json(r));
        tam = r.cp;
    } else {
        for (const auto& [p, e] : factor_discriminant(c.discriminant())) {
            (void)e;
            auto r = classify(c, p);
            rows.push_back(to_json(r));
            tam *= r.cp;
        }
    }
    if (cfg.output_format == "csv") {
        std::string out = "p,kodaira,cp,minimal,rescalings,vmin\n";
        for (const auto& r : rows)
            out += r["p"].dump() + "," + r["kodaira"].get<std::string>() + "," +
                   r["cp"].dump() + "," + r["minimal"].dump() + "," + r["rescalings"].dump() +
                   "," + r["vmin"].dump() + "\n";
        out += "tamagawa_product," + tam.get_str();
        emit(cfg, out);
    } else {
        json out{{"curve", to_json(c)},
                 {"local", rows},
                 {"tamagawa_product", tam.get_str()}};
        emit(cfg, out.dump(2));
    }
    return 0;
}

int cmd_density(const Config& cfg, const std::string& p_opt, std::uint64_t c_opt,
                std::uint64_t m_opt, bool table, bool table1, std::uint64_t mmax) {
    if (table1) {
        emit(cfg, p_tam_csv(mmax, cfg.prime_cutoff));
        return 0;
    }
    if (table) {
        if (p_opt.empty()) throw std::invalid_argument("--table needs --p");
        emit(cfg, delta_table_csv(Int(p_opt)));
        return 0;
    }
    if (m_opt) {
        auto v = p_tam(m_opt, cfg.prime_cutoff);
        if (cfg.output_format == "csv") {
            char buf[96];
            std::snprintf(buf, sizeof buf, "m,p_tam,error_bound\n%llu,%.12g,%.3g",
                          static_cast<unsigned long long>(m_opt), v.value, v.error_bound);
            emit(cfg, buf);
        } else {
            json out = to_json(v);
            out["m"] = m_opt;
            emit(cfg, out.dump(2));
        }
        return 0;
    }
    if (p_opt.empty() || !c_opt)
        throw std::invalid_argument("density needs --m, --table/--table1, or --p with --c");
    Rat d = delta(Int(p_opt), c_opt);
    if (cfg.output_format == "csv") {
        emit(cfg, "p,c,delta\n" + p_opt + "," + std::to_string(c_opt) + "," + d.get_str());
    } else {
        emit(cfg, json{{"p", p_opt},
                       {"c", c_opt},
                       {"delta", d.get_str()},
                       {"numeric", mpq_get_d(d.get_mpq_t())}}
                      .dump(2));
    }
    return 0;
}

int cmd_series(const Config& cfg, double s) {
    auto v = l_tam(s, cfg.prime_cutoff, cfg.c_cutoff);
    auto f2 = l_tam_local(2, s, cfg.c_cutoff);
    auto f3 = l_tam_local(3, s, cfg.c_cutoff);
    if (cfg.output_format == "csv") {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "s,l_tam,error_bound,factor2,factor3\n%g,%.12g,%.3g,%.12g,%.12g",
                      s, v.value, v.error_bound, f2.value, f3.value);
        emit(cfg, buf);
    } else {
        json out{{"s", s},
                 {"l_tam", to_json(v)},
                 {"local_factor_2", to_json(f2)},
                 {"local_factor_3", to_json(f3)}};
        emit(cfg, out.dump(2));
    }
    return 0;
}

int cmd_census(const Config& cfg, const std::string& x, double oracle_rate, bool allow_long) {
    Int X(x);
    if (X > 10000000 && !allow_long)
        throw std::invalid_argument(
            "census above X = 10^7 is a long run; pass --allow-long to confirm");
    CensusOptions opts;
    opts.shards = cfg.shards;
    opts.threads = cfg.threads;
    opts.tam_ceiling = cfg.tam_ceiling;
    opts.sample_oracle_rate = oracle_rate;
    auto r = run_census(X, opts);
    emit(cfg, cfg.output_format == "csv" ? census_csv(r) : to_json(r).dump(2));
    return 0;
}

int cmd_heights(const Config& cfg, const std::string& a4, const std::string& a6,
                const std::string& bound) {
    Curve c = parse_curve(a4, a6);
    Int tam = tamagawa_product(c);
    bool minimal = true;
    for (const auto& [p, e] : factor_discriminant(c.discriminant())) {
        (void)e;
        minimal = minimal && is_short_minimal(c, p);
    }
    bool local_sum_ok = (tam == 1) && minimal && convenient_geometry(c);

    json pts = json::array();
    for (const auto& P : find_points(c, Int(bound))) {
        json row{{"point", to_json(P)}};
        if (local_sum_ok) {
            row["height"] = to_json(canonical_height(c, P));
        } else {
            HeightReport r;
            r.method = HeightMethod::DoublingOracle;
            Int c2 = P.C * P.C;
            r.naive_height = abs(P.A) > c2 ? abs(P.A) : c2;
            r.weil = std::log(mpz_get_d(r.naive_height.get_mpz_t()));
            r.canonical = canonical_height_oracle(c, P, 8);
            r.inequality_holds = r.canonical >= r.weil / 2 - 1e-9;
            row["height"] = to_json(r);
        }
        pts.push_back(row);
    }
    json out{{"curve", to_json(c)},
             {"tamagawa_product", tam.get_str()},
             {"globally_minimal", minimal},
             {"method", local_sum_ok ? "local-sum" : "doubling-oracle"},
             {"points", pts}};
    emit(cfg, out.dump(2));
    return 0;
}

int cmd_convenient(const Config& cfg, const std::string& a4, const std::string& a6,
                   bool fe_check) {
    Curve c = parse_curve(a4, a6);
    auto t = is_convenient(c);
    json out = to_json(t);
    if (fe_check && t.kind == ConvenientKind::TwoComponent) {
        auto fp = check_fe_positivity(c);
        out["fe_positivity"] = json{{"certified", fp.certified},
                                    {"cells", fp.cells},
                                    {"positive", fp.positive_cells},
                                    {"negative", fp.negative_cells},
                                    {"inconclusive", fp.inconclusive_cells}};
    }
    emit(cfg, out.dump(2));
    return 0;
}

int cmd_verify(const Config& cfg, const std::string& suite, const std::string& census_x,
               const std::string& heights_x) {
    verify::VerifyOptions opts;
    opts.prime_cutoff = cfg.prime_cutoff;
    opts.c_cutoff = cfg.c_cutoff;
    opts.threads = cfg.threads;
    opts.census_x = Int(census_x);
    opts.heights_x = Int(heights_x);
    auto results = verify::run_suite(suite, opts);
    if (results.empty()) throw std::invalid_argument("unknown suite: " + suite);
    int failures = 0;
    json rows = json::array();
    for (const auto& r : results) {
        std::printf("%s  criterion %2d: %s\n      %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        rows.push_back(json{{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                            {"detail", r.detail}});
        if (!r.pass) ++failures;
    }
    if (!cfg.output_path.empty()) {
        std::ofstream f(cfg.output_path);
        f << rows.dump(2) << "\n";
    }
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tamagawa products, reduction types, and heights of elliptic curves over Q"};
    app.require_subcommand(1);
    Config cfg;

    app.add_option("--prime-cutoff", cfg.prime_cutoff, "Euler product prime cutoff");
    app.add_option("--c-cutoff", cfg.c_cutoff, "local factor coefficient cutoff");
    app.add_option("--precision-bits", cfg.precision_bits,
                   "requested mantissa bits for numeric rendering (>= 64; 113 effective)");
    app.add_option("--shards", cfg.shards, "census shard count");
    app.add_option("--threads", cfg.threads, "worker threads (0 = all)")
        ->envname("TAMLAB_THREADS");
    app.add_option("--tam-ceiling", cfg.tam_ceiling, "histogram ceiling for Tam(E)");
    app.add_option("--out", cfg.output_path, "write output to a file");
    app.add_option("--format", cfg.output_format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string a4, a6, p_opt, x = "1000000", bound = "100", suite = "all";
    std::string census_x = "1000000", heights_x = "100000";
    std::uint64_t c_opt = 0, m_opt = 0, mmax = 12;
    double s_opt = -1.0, oracle_rate = 0.0;
    bool table = false, table1 = false, allow_long = false, fe_check = false, series_flag = false;

    auto* local = app.add_subcommand("local", "local reduction data at the bad primes");
    local->add_option("--a4", a4)->required();
    local->add_option("--a6", a6)->required();
    local->add_option("--p", p_opt, "restrict to a single prime");

    auto* density = app.add_subcommand("density", "exact densities and P_Tam coefficients");
    density->add_option("--p", p_opt);
    density->add_option("--c", c_opt);
    density->add_option("--m", m_opt, "P_Tam(m) with certified error");
    density->add_flag("--series", series_flag, "alias of the series subcommand");
    density->add_option("--s", s_opt, "exponent for --series");
    density->add_flag("--table", table, "CSV dump of the delta tables at --p");
    density->add_flag("--table1", table1, "CSV of P_Tam(1..mmax)");
    density->add_option("--mmax", mmax);

    auto* series = app.add_subcommand("series", "L_Tam(s) with certified error");
    series->add_option("--s", s_opt)->required();

    auto* census = app.add_subcommand("census", "exhaustive census of curves with ht <= X");
    census->add_option("--x", x)->required();
    census->add_option("--sample-oracle-rate", oracle_rate,
                       "fraction of curves re-checked against the general algorithm");
    census->add_flag("--allow-long", allow_long, "confirm a run above X = 10^7");

    auto* heights = app.add_subcommand("heights", "point search and height reports");
    heights->add_option("--a4", a4)->required();
    heights->add_option("--a6", a6)->required();
    heights->add_option("--bound", bound, "naive height bound for the point search");

    auto* conv = app.add_subcommand("convenient", "convenient-curve classification");
    conv->add_option("--a4", a4)->required();
    conv->add_option("--a6", a6)->required();
    conv->add_flag("--fe-check", fe_check, "also certify F_E positivity (two-component)");

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    verify_cmd->add_option("--suite", suite,
                           "exact | series | census | oracle | heights | properties | all");
    verify_cmd->add_option("--census-x", census_x);
    verify_cmd->add_option("--heights-x", heights_x);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    if (cfg.precision_bits < 64) {
        std::fprintf(stderr, "error: --precision-bits must be >= 64\n");
        return 2;
    }

    try {
        if (local->parsed()) return cmd_local(cfg, a4, a6, p_opt);
        if (density->parsed()) {
            if (series_flag) return cmd_series(cfg, s_opt);
            return cmd_density(cfg, p_opt, c_opt, m_opt, table, table1, mmax);
        }
        if (series->parsed()) return cmd_series(cfg, s_opt);
        if (census->parsed()) return cmd_census(cfg, x, oracle_rate, allow_long);
        if (heights->parsed()) return cmd_heights(cfg, a4, a6, bound);
        if (conv->parsed()) return cmd_convenient(cfg, a4, a6, fe_check);
        if (verify_cmd->parsed()) return cmd_verify(cfg, suite, census_x, heights_x);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

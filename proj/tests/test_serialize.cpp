#include "doctest.h"
#include "tamlab/serialize.hpp"

using namespace tamlab;

TEST_CASE("curve JSON uses decimal strings and round-trips") {
    Curve c{Int("-123456789012345678901234567890"), Int(7)};
    json j = to_json(c);
    CHECK(j["a4"].is_string());
    CHECK(j["a6"] == "7");
    Curve back = curve_from_json(j);
    CHECK(back == c);
}

TEST_CASE("local reduction JSON carries the stable kodaira grammar") {
    auto r = classify(Curve{-3, 27}, 5);
    json j = to_json(r);
    CHECK(j["p"] == 5);
    CHECK(j["kodaira"] == "In:2");
    CHECK(j["cp"] == 2);
    CHECK(j["minimal"] == true);
    CHECK(kodaira_from_string(j["kodaira"].get<std::string>()) == r.kodaira);
}

TEST_CASE("census serialization is self-consistent") {
    auto r = run_census(Int(5000));
    json j = to_json(r);
    std::uint64_t total = j["tam_overflow"].get<std::uint64_t>();
    for (const auto& [m, k] : j["tam_histogram"].items()) total += k.get<std::uint64_t>();
    CHECK(total == j["n_total"].get<std::uint64_t>());

    auto csv = census_csv(r);
    CHECK(csv.rfind("X,m,N_m,N,ratio\n", 0) == 0);
    CHECK(csv.find("\n5000,1,") != std::string::npos);
}

TEST_CASE("delta table CSV includes the hat families at p = 3") {
    auto csv = delta_table_csv(Int(3));
    CHECK(csv.find("3,I0,1,2/3,4/177147") != std::string::npos);
    CHECK(csv.find("3,IV*,1,7/19683,0") != std::string::npos);
}

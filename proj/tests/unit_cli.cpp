#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "alc/cli_app.hpp"

using namespace alc;
using nlohmann::json;

namespace {

json slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

// Minimal structural validation against our shipped draft-07 subset:
// required keys, primitive types, additionalProperties: false.
void check_schema(const json& doc, const json& schema) {
    if (schema.contains("required"))
        for (const auto& k : schema["required"]) REQUIRE(doc.contains(k.get<std::string>()));
    if (schema.value("additionalProperties", json(true)) == json(false)) {
        for (auto it = doc.begin(); it != doc.end(); ++it)
            REQUIRE(schema["properties"].contains(it.key()));
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!schema.contains("properties") || !schema["properties"].contains(it.key()))
            continue;
        const json& p = schema["properties"][it.key()];
        std::string ty = p.value("type", "");
        if (ty == "number") CHECK(it.value().is_number());
        if (ty == "boolean") CHECK(it.value().is_boolean());
        if (ty == "integer") CHECK(it.value().is_number_integer());
        if (ty == "array") CHECK(it.value().is_array());
        if (ty == "object") CHECK(it.value().is_object());
    }
}

std::string tmpdir(const std::string& tag) {
    auto d = std::filesystem::temp_directory_path() / ("alc_cli_" + tag);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d.string();
}

const std::string kSchemas = std::string(TEST_SOURCE_DIR) + "/../schemas";

}  // namespace

TEST_CASE("config validation") {
    RunConfig cfg = parse_config(R"({"domain":{"shape":"ball","R":2.0},"alphas":[0.1]})");
    CHECK(cfg.domain.a == doctest::Approx(2.0));
    CHECK(cfg.alphas.size() == 1);

    // Unknown keys are rejected at both levels.
    CHECK_THROWS_AS(parse_config(R"({"domian":{}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain":{"shape":"ball","radius":1}})"), ConfigError);

    // Schema rules.
    CHECK_THROWS_AS(parse_config(R"({"quadrature_tol":0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"alphas":[]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"alphas":[-0.1]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain":{"shape":"cube"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"domain":{"shape":"ellipsoid","a":2.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"ppl":4})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sigma":2.0})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);

    // Defaults survive an empty config.
    RunConfig d = parse_config("{}");
    CHECK(d.domain.a == doctest::Approx(2.1717));
    CHECK(d.with_psi1);
}

TEST_CASE("profile command artifacts") {
    std::string dir = tmpdir("profile");
    RunConfig cfg;
    CHECK(cmd_profile(cfg, dir) == 0);

    json c = slurp(dir + "/constants.json");
    check_schema(c, slurp(kSchemas + "/constants.schema.json"));
    CHECK(c["c0"].get<double>() == doctest::Approx(0.9428090415820634).epsilon(1e-10));
    CHECK(c["sigma0"].get<double>() == c["c0"].get<double>());
    CHECK(c["c1"].get<double>() == doctest::Approx(0.645).epsilon(2e-2));

    // Table spans [-tmax, tmax].
    std::ifstream tab(dir + "/profile_table.csv");
    REQUIRE(tab.good());
    std::string header, first, line, last;
    std::getline(tab, header);
    CHECK(header == "t,w,wp,psi1,psi1p");
    std::getline(tab, first);
    while (std::getline(tab, line))
        if (!line.empty()) last = line;
    CHECK(first.substr(0, 3) == "-12");
    CHECK(last.substr(0, 2) == "12");

    // tmax override still validates.
    RunConfig cfg16 = cfg;
    cfg16.tmax = 16.0;
    std::string dir16 = tmpdir("profile16");
    CHECK(cmd_profile(cfg16, dir16) == 0);
    json c16 = slurp(dir16 + "/constants.json");
    CHECK(c16["tmax"].get<double>() == doctest::Approx(16.0));
}

TEST_CASE("place command artifacts") {
    std::string dir = tmpdir("place");
    RunConfig cfg;
    cfg.modes = {0, 1, 2, 3};
    CHECK(cmd_place(cfg, dir) == 0);

    json p = slurp(dir + "/placement.json");
    check_schema(p, slurp(kSchemas + "/placement.schema.json"));
    CHECK(p["found"].get<bool>());
    CHECK(p["y_bar"].get<double>() == doctest::Approx(1.5089).epsilon(1e-3));
    CHECK(p["det"].get<double>() == doctest::Approx(-0.285).epsilon(2e-2));
    CHECK(p["nondegenerate"].get<bool>());
    CHECK(p["modes"].size() == 4);
    for (auto& [key, lam] : p["modes"].items()) CHECK(lam.size() >= 1);
}

TEST_CASE("place command on an ellipsoid") {
    std::string dir = tmpdir("place_ell");
    RunConfig cfg = parse_config(R"({"domain":{"shape":"ellipsoid","a":2.4,"b":2.0}})");
    CHECK(cmd_place(cfg, dir) == 0);
    json p = slurp(dir + "/placement.json");
    CHECK(p["found"].get<bool>());
    CHECK(p["c"].get<double>() > 0.0);
    CHECK(std::filesystem::exists(dir + "/catenoid_meridian.csv"));
    CHECK(std::filesystem::exists(dir + "/boundary_meridian.csv"));
}

TEST_CASE("solve command writes a report") {
    std::string dir = tmpdir("solve");
    RunConfig cfg;
    cfg.alphas = {0.25};
    CHECK(cmd_solve(cfg, dir) == 0);
    json r = slurp(dir + "/report.json");
    check_schema(r, slurp(kSchemas + "/report.schema.json"));
    REQUIRE(r["runs"].size() == 1);
    CHECK(r["runs"][0]["converged"].get<bool>());
    check_schema(r["runs"][0], slurp(kSchemas + "/report.schema.json")["properties"]["runs"]["items"]);
}

TEST_CASE("parallel independent runs") {
    std::string dir = tmpdir("jobs");
    RunConfig cfg = parse_config(R"({"alphas":[0.25,0.2],"jobs":2})");
    CHECK(cmd_solve(cfg, dir) == 0);
    json r = slurp(dir + "/report.json");
    REQUIRE(r["runs"].size() == 2);
    for (const auto& run : r["runs"]) CHECK(run["converged"].get<bool>());
}

TEST_CASE("deterministic outputs for a fixed config") {
    std::string d1 = tmpdir("det1"), d2 = tmpdir("det2");
    RunConfig cfg;
    CHECK(cmd_place(cfg, d1) == 0);
    CHECK(cmd_place(cfg, d2) == 0);
    std::ifstream f1(d1 + "/placement.json"), f2(d2 + "/placement.json");
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}

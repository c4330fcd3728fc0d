#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sll/config.hpp"
#include "sll/recipes.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace sll;
using nlohmann::json;

namespace {

Config theory_config() {
    return parse_config_text("activation=tanh2\nk=8\nd=100\nn=5000\n"
                             "delta=0.05\nreadout.kind=powerlaw\n"
                             "readout.beta=1\nseed=3\n");
}

std::vector<std::string> errors_of(const Config& c, RunKind kind) {
    try {
        validate_config(c, kind);
    } catch (const ConfigError& e) {
        return e.errors;
    }
    return {};
}

bool any_contains(const std::vector<std::string>& msgs,
                  const std::string& needle) {
    for (const auto& m : msgs)
        if (m.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("config parse/emit round-trip") {
    Config c = theory_config();
    Config back = parse_config_text(emit_config(c));
    CHECK(back.kv == c.kv);

    // comments and whitespace are ignored
    Config spaced = parse_config_text("  k = 8   # width\n\n#full line\nd=100\n");
    CHECK(spaced.get_int("k") == 8);
    CHECK(spaced.get_int("d") == 100);

    CHECK(config_hash(c) == config_hash(c));
    Config other = c;
    other.set("delta", "0.06");
    CHECK(config_hash(other) != config_hash(c));
    CHECK(config_hash(c).size() == 16);

    CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS((void)c.get_double("activation"), ConfigError);
}

TEST_CASE("validation normalizes a theory config") {
    auto validated = validate_config(theory_config(), RunKind::theory);
    CHECK(validated.normalized.get("activation") == "tanh2-stripped");
    CHECK(validated.warnings.empty());
    // round trip on the normalized form is the identity
    auto again = validate_config(validated.normalized, RunKind::theory);
    CHECK(again.normalized.kv == validated.normalized.kv);

    auto model = model_from_config(validated.normalized);
    CHECK(model.k == 8);
    CHECK(model.readout.v.size() == 8);
    CHECK(model.profile->info_exponent() >= 3);
    CHECK_NOTHROW(model.validate());
    auto teacher = teacher_from_config(validated.normalized);
    CHECK(teacher.k() == 8);
    CHECK(teacher.d() == 100);
}

TEST_CASE("hypothesis-labeled validation failures") {
    Config c = theory_config();
    c.set("k", "200");
    CHECK(any_contains(errors_of(c, RunKind::theory), "H3"));

    c = theory_config();
    c.set("activation", "relu");
    CHECK(any_contains(errors_of(c, RunKind::theory), "H4"));
    // quadratic components are fine outside the fixed-point theory
    CHECK(errors_of(c, RunKind::kernels).empty());
    Config glm = parse_config_text("activation=relu\nd=100\nn=5000\ndelta=1\n");
    CHECK(errors_of(glm, RunKind::mc_glm).empty());

    c = theory_config();
    c.kv.erase("delta");
    CHECK(any_contains(errors_of(c, RunKind::theory), "delta"));

    c = theory_config();
    c.set("readout.kind", "fractal");
    CHECK(any_contains(errors_of(c, RunKind::theory), "H2"));

    c = theory_config();
    c.set("bogus.key", "1");
    CHECK(any_contains(errors_of(c, RunKind::theory), "unknown config key"));

    c = theory_config();
    c.set("n", "50");
    auto validated = validate_config(c, RunKind::theory);
    CHECK(any_contains(validated.warnings, "H1"));
}

TEST_CASE("environment overrides") {
    Config c = theory_config();
    setenv("SLL_DELTA", "0.25", 1);
    setenv("SLL_READOUT_BETA", "0.7", 1);
    apply_env_overrides(c);
    unsetenv("SLL_DELTA");
    unsetenv("SLL_READOUT_BETA");
    CHECK(c.get_double("delta") == doctest::Approx(0.25));
    CHECK(c.get_double("readout.beta") == doctest::Approx(0.7));
}

TEST_CASE("recipe validation") {
    CHECK(recipe_names().size() == 6);
    CHECK_NOTHROW(recipe_by_name("fig2"));
    try {
        recipe_by_name("fig9");
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("fig9") != std::string::npos);
        for (const auto& name : recipe_names())
            CHECK(msg.find(name) != std::string::npos);
    }
    FigureRecipe bad = recipe_by_name("fig5");
    bad.scale = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = recipe_by_name("fig5");
    bad.runs = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("recipes write CSVs with a complete manifest") {
    auto dir = std::filesystem::temp_directory_path() / "sll-recipe-test";
    std::filesystem::remove_all(dir);

    FigureRecipe fig5 = recipe_by_name("fig5");
    fig5.scale = 0.05;
    fig5.runs = 1;
    std::string manifest_path = run_recipe(fig5, dir.string(), 7);
    json manifest;
    std::ifstream(manifest_path) >> manifest;
    CHECK(manifest["recipe"] == "fig5");
    REQUIRE(manifest["files"].size() == 1);
    const std::set<std::string> tags = {"theory", "monte-carlo", "sgd"};
    for (const auto& file : manifest["files"]) {
        auto csv = dir / file["path"].get<std::string>();
        REQUIRE(std::filesystem::exists(csv));
        std::ifstream in(csv);
        std::string header;
        std::getline(in, header);
        // header must list exactly the declared columns, in order
        std::string expected;
        for (const auto& col : file["columns"]) {
            if (!expected.empty()) expected += ",";
            expected += col["name"].get<std::string>();
            CHECK(tags.count(col["provenance"].get<std::string>()) == 1);
            CHECK(!col["units"].get<std::string>().empty());
        }
        CHECK(header == expected);
        int rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        CHECK(rows > 0);
    }

    // deterministic recipe reruns reproduce identical bytes
    auto first = dir / "fig5_overlap_profile.csv";
    std::stringstream a;
    a << std::ifstream(first).rdbuf();
    run_recipe(fig5, dir.string(), 7);
    std::stringstream b;
    b << std::ifstream(first).rdbuf();
    CHECK(a.str() == b.str());
}

TEST_CASE("fig2 recipe emits learning curve and overlap profiles") {
    auto dir = std::filesystem::temp_directory_path() / "sll-recipe-fig2";
    std::filesystem::remove_all(dir);
    FigureRecipe fig2 = recipe_by_name("fig2");
    fig2.scale = 0.1;   // d = 20, k = 10: structural check only
    fig2.runs = 1;
    std::string manifest_path = run_recipe(fig2, dir.string(), 11);
    json manifest;
    std::ifstream(manifest_path) >> manifest;
    REQUIRE(manifest["files"].size() == 2);
    std::set<std::string> tags;
    for (const auto& file : manifest["files"]) {
        CHECK(std::filesystem::exists(dir / file["path"].get<std::string>()));
        for (const auto& col : file["columns"])
            tags.insert(col["provenance"].get<std::string>());
    }
    CHECK(tags.count("theory") == 1);
    CHECK(tags.count("monte-carlo") == 1);
}

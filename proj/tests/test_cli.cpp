#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

#include "spinorlab/harness.hpp"

using namespace spinorlab;
using nlohmann::json;

namespace {

RunContext ctx_for(const std::string& dir) {
    std::filesystem::create_directories(dir);
    RunContext ctx;
    ctx.seed = 7;
    ctx.out_dir = dir;
    ctx.threads = 2;
    return ctx;
}

json base(const std::string& id) {
    return json{{"schema", "spinorlab-config v1"}, {"experiment", id}};
}

}  // namespace

TEST_CASE("config validation: schema, experiment id, unknown keys") {
    auto ctx = ctx_for("out_test");
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "decorrelation"}}, ctx), ConfigInvalid);
    CHECK_THROWS_AS(run_experiment(base("no-such-experiment"), ctx), ConfigInvalid);
    json bad = base("decorrelation");
    bad["mystery_knob"] = 3;
    CHECK_THROWS_AS(run_experiment(bad, ctx), ConfigInvalid);
    json badval = base("ratio-identities");
    badval["max_faces"] = "three";
    CHECK_THROWS_AS(run_experiment(badval, ctx), ConfigInvalid);
}

TEST_CASE("small experiments run, write versioned outputs, and pass") {
    auto ctx = ctx_for("out_test");
    json cfg = base("ratio-identities");
    cfg["max_faces"] = 3;
    cfg["include_large"] = false;
    cfg["markings_per_domain"] = 4;
    cfg["field_markings_per_domain"] = 1;
    auto out = run_experiment(cfg, ctx);
    CHECK(out.pass);
    CHECK(out.rows > 0);
    // csv carries the schema header
    std::ifstream is(out.csv_path);
    std::string first;
    std::getline(is, first);
    CHECK(first.rfind("# schema=spinorlab-", 0) == 0);
    // summary json carries pass flag, claim and seed
    std::ifstream js(out.json_path);
    json summary;
    js >> summary;
    CHECK(summary.at("pass").get<bool>());
    CHECK(summary.at("seed").get<uint64_t>() == 7);
    CHECK(!summary.at("claim").get<std::string>().empty());
}

TEST_CASE("outputs are reproducible for a fixed seed") {
    auto ctx = ctx_for("out_test_a");
    json cfg = base("decorrelation");
    auto o1 = run_experiment(cfg, ctx);
    auto ctx2 = ctx_for("out_test_b");
    auto o2 = run_experiment(cfg, ctx2);
    auto slurp = [](const std::string& p) {
        std::ifstream is(p);
        return std::string(std::istreambuf_iterator<char>(is), {});
    };
    CHECK(slurp(o1.csv_path) == slurp(o2.csv_path));
    CHECK(o1.pass);
}

TEST_CASE("cli wrapper maps outcomes to exit codes") {
    std::filesystem::create_directories("out_test");
    {
        std::ofstream os("out_test/bad.json");
        os << "{ not json";
    }
    RunContext overrides;
    overrides.seed = 0;
    overrides.threads = -1;
    CHECK(run_experiment_cli("out_test/bad.json", overrides) == 2);
    CHECK(run_experiment_cli("out_test/missing.json", overrides) == 2);
    {
        std::ofstream os("out_test/dec.json");
        os << R"({"schema":"spinorlab-config v1","experiment":"decorrelation",)"
           << R"("out_dir":"out_test"})";
    }
    CHECK(run_experiment_cli("out_test/dec.json", overrides) == 0);
    CHECK(run_experiment_cli("out_test/dec.json", overrides, "cft-match") == 2);
}
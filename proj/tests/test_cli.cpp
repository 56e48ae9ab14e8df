// Drives the built binary end to end: verb results, exit codes, report
// shape.  The CLI path arrives as the first program argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_cli;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_verb(const std::string& verb, const std::string& params,
                   const std::string& extra = "") {
    const std::string tmp = "/tmp/patlab_cli_test_in.json";
    {
        std::ofstream f(tmp);
        f << params;
    }
    const std::string cmd =
        "'" + g_cli + "' " + verb + " --input " + tmp + " " + extra + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json results_of(const RunResult& r) {
    REQUIRE(r.exit_code == 0);
    return nlohmann::json::parse(r.out).at("results");
}

} // namespace

TEST_CASE("worked verb invocations") {
    auto tree = results_of(run_verb("tree-enum", R"({"f":[1,2,4],"k":3})"));
    CHECK(tree.at("count") == 30);

    auto blocking = results_of(run_verb("blocking", R"({"f":[1,2],"k":2})"));
    CHECK(blocking.at("count") == 12);

    auto type = results_of(run_verb("type-check", R"({"shape":"Q","f":[1],"k":1,"leaves":["0","1"]})"));
    CHECK(type.at("consistent") == false);

    auto subtrees = results_of(run_verb("s-enum", R"({"f":[1,2,4],"k":3})"));
    CHECK(subtrees.at("count") == 150);
}

TEST_CASE("report envelope") {
    auto r = run_verb("tree-enum", R"({"f":[1],"k":1})", "--seed 5");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("verb") == "tree-enum");
    CHECK(j.at("seed") == 5);
    CHECK(j.at("tool_version") == "0.1.0");
    CHECK(j.contains("input_digest"));
    CHECK(j.contains("elapsed_ms"));
}

TEST_CASE("csv flattening") {
    auto r = run_verb("tree-enum", R"({"f":[1],"k":1})", "--format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("verb,input_digest,result,elapsed_ms,seed\n", 0) == 0);
    CHECK(r.out.find("tree-enum,") != std::string::npos);
}

TEST_CASE("exit code two on invalid input") {
    CHECK(run_verb("tree-enum", "this is not json").exit_code == 2);
    CHECK(run_verb("tree-enum", "{}").exit_code == 2);
    CHECK(run_verb("tree-enum", R"({"f":[1],"k":7})").exit_code == 2);
    CHECK(run_verb("tf-amalgamate",
                   R"({"M":{"f":[1],"k":1,"P":[{"id":0,"leaf":"0"}],"Q":[],"R":[]},
                       "N":{"f":[1],"k":1,"P":[{"id":0,"leaf":"1"}],"Q":[],"R":[]},
                       "shared":[[0,0]]})")
              .exit_code == 2);
}

TEST_CASE("exit code three on guarded sizes") {
    CHECK(run_verb("blocking", R"({"f":[1,2,4,8,16,31],"k":5})").exit_code == 3);
}

TEST_CASE("seeded generation is reproducible and seed-sensitive") {
    const std::string params = R"({"f":[1,2,4],"k":2,"nP":6,"nQ":5,"density":0.5})";
    auto a = results_of(run_verb("tf-gen", params, "--seed 3"));
    auto b = results_of(run_verb("tf-gen", params, "--seed 3"));
    auto c = results_of(run_verb("tf-gen", params, "--seed 4"));
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.at("violations").empty());
}

TEST_CASE("algebra evaluation verbs") {
    auto met = results_of(run_verb("ba-eval", R"({"sizes":[2,2,2],"op":"meet","a":[{"0":1}],"b":[{"0":0}]})"));
    CHECK(met.at("result").empty());  // clashing cells meet in zero
    auto ord = results_of(run_verb("ba-eval", R"({"sizes":[2,2],"op":"leq","a":[{"0":1,"1":0}],"b":[{"0":1}]})"));
    CHECK(ord.at("result") == true);
    auto sub = results_of(run_verb(
        "ba-eval", R"({"sizes":[4,4],"op":"compatible-subfamily","family":[{"0":0},{"0":1},{"1":2}],"m":2})"));
    CHECK(sub.at("found") == true);
}

TEST_CASE("pattern verification reports the escaping set") {
    auto bad = results_of(run_verb(
        "pattern-verify",
        R"({"pattern":{"ctx":{"sizes":[2,2]},"indices":2,"cap":2,
            "entries":{"":[{}],"0":[{}],"1":[{}],"0,1":[{"0":0,"1":0}]},
            "distinguished":{"0":0,"1":0}},
            "refinement":{"per_index":{"0":[{}],"1":[{}]}}})"));
    CHECK(bad.at("is_pattern") == true);
    CHECK(bad.at("refines") == false);
    CHECK(bad.at("witness") == "0,1");
}

TEST_CASE("escape probe accepts an explicit control map") {
    auto r = results_of(run_verb(
        "escape-probe",
        R"({"graph":{"n":3,"k":2,"vertices":3,"edges":[[0,1,2]]},
            "control":{"0,1":[0,1],"0,2":[0,2],"1,2":[1,2]}})"));
    CHECK(r.at("have_control") == true);
    CHECK(r.at("escaped") == nlohmann::json::array({0, 1, 2}));
}

TEST_CASE("lift through the cli round-trips a structure") {
    auto lifted = results_of(run_verb(
        "tf-lift",
        R"({"structure":{"f":[1,2],"k":1,"P":[{"id":0,"leaf":"1"}],"Q":[{"id":1,"s":["","1"]}],"R":[[1,0]]}})"));
    CHECK(lifted.at("found") == true);
    CHECK(lifted.at("structure").at("k") == 2);
    // the lifted structure checks out when fed back
    nlohmann::json check_params{{"structure", lifted.at("structure")}};
    auto checked = results_of(run_verb("tf-check", check_params.dump()));
    CHECK(checked.at("ok") == true);
}

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[argc - 1];
    doctest::Context context;
    context.applyCommandLine(argc - (argc > 1 ? 1 : 0), argv);
    return context.run();
}

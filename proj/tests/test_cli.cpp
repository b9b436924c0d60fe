#include <catch2/catch.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "k3cert/report.hpp"
#include "k3cert/suites.hpp"

using namespace k3cert;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(K3CERT_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

// minimal structural validator for the subset of schema the report doc uses:
// type, required, properties, items, enum
bool validate(const Json& schema, const Json& value, std::string& why) {
    if (schema.contains("type")) {
        std::string t = schema["type"];
        bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                  (t == "string" && value.is_string()) ||
                  (t == "number" && value.is_number()) ||
                  (t == "integer" && value.is_number_integer());
        if (!ok) {
            why = "expected type " + t;
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"]) ok = ok || e == value;
        if (!ok) {
            why = "value not in enum";
            return false;
        }
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) {
                why = "missing required key " + key.get<std::string>();
                return false;
            }
        }
    }
    if (schema.contains("properties")) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (!value.contains(key)) continue;
            if (!validate(sub, value.at(key), why)) {
                why = key + ": " + why;
                return false;
            }
        }
    }
    if (schema.contains("items") && value.is_array()) {
        for (const auto& item : value) {
            if (!validate(schema["items"], item, why)) return false;
        }
    }
    return true;
}

Json load_schema() {
    std::ifstream in(K3CERT_SCHEMA_PATH);
    REQUIRE(in.good());
    return Json::parse(in);
}

}  // namespace

TEST_CASE("reports validate against the shipped schema") {
    Json schema = load_schema();
    std::string why;
    SECTION("verify-h") {
        RunResult r = run_cli("verify-h --stable-output");
        CHECK(r.exit_code == 0);
        Json rep = Json::parse(r.out);
        INFO(why);
        CHECK(validate(schema, rep, why));
        CHECK(rep["payload"]["z1_constant"] == "omega");
        CHECK(rep["payload"]["symbolic_identity"] == true);
        CHECK(rep["payload"]["origin_singular"] == true);
    }
    SECTION("check-hk with reduced trials") {
        RunResult r = run_cli("check-hk --trials 100 --seed 9 --stable-output");
        CHECK(r.exit_code == 0);
        Json rep = Json::parse(r.out);
        INFO(why);
        CHECK(validate(schema, rep, why));
        CHECK(rep["payload"].contains("quaternion_max_dev"));
        CHECK(rep["payload"].contains("triholo_residual_max"));
        CHECK(rep["payload"].contains("s_constancy_iff_dev"));
        // the report names the third-angle convention it implements
        REQUIRE(rep["notes"].size() >= 1);
        bool named = false;
        for (const auto& n : rep["notes"])
            named = named || n.get<std::string>().find("third Kahler angle") != std::string::npos;
        CHECK(named);
    }
}

TEST_CASE("surface decisions through the CLI") {
    SECTION("the named registry resolves") {
        RunResult r = run_cli("check-surface --poly fermat --stable-output");
        CHECK(r.exit_code == 0);
        Json rep = Json::parse(r.out);
        CHECK(rep["payload"]["status"] == "certified-nonsingular");
        CHECK(rep["payload"]["charts_checked"] == 4);
        CHECK(rep["overall"] == "pass");
    }
    SECTION("a singular input fails with its witness in the report") {
        RunResult r = run_cli("check-surface --poly x0^4+x1^4+x2^4 --stable-output");
        CHECK(r.exit_code == 1);
        Json rep = Json::parse(r.out);
        CHECK(rep["overall"] == "fail");
        CHECK(rep["payload"]["status"] == "singular");
        Json coords = rep["payload"]["witness"]["coords"];
        CHECK(coords == Json::array({"0", "0", "0", "1"}));
    }
}

TEST_CASE("CLI determinism") {
    RunResult a = run_cli("check-hk --trials 150 --seed 7 --stable-output");
    RunResult b = run_cli("check-hk --trials 150 --seed 7 --stable-output");
    CHECK(a.out == b.out);
    RunResult c = run_cli("check-hk --trials 150 --seed 8 --stable-output");
    CHECK(a.out != c.out);
    SECTION("the environment variable seeds by default") {
        std::string cmd = "K3CERT_SEED=7 " + std::string(K3CERT_CLI_PATH) +
                          " check-hk --trials 150 --stable-output 2>/dev/null";
        std::array<char, 4096> buf;
        std::string out;
        FILE* pipe = popen(cmd.c_str(), "r");
        REQUIRE(pipe != nullptr);
        while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
            out.append(buf.data(), n);
        pclose(pipe);
        CHECK(out == a.out);
    }
}

TEST_CASE("point JSON round trips") {
    ProjPointQ p({GaussRat(1), GaussRat(1, 2, 0, 1), GaussRat(0), GaussRat(3, 1, 2, 1)});
    Json j = point_to_json(p);
    CHECK(j["coords"] == Json::array({"1", "1/2", "0", "3+2i"}));
    CHECK(proj_equal(exact_point_from_json(j), p));
    ProjPointC q({{0.5, -0.25}, {1.0, 0.0}, {0.0, 2.0}});
    ProjPointC back = numeric_point_from_json(point_to_json(q));
    CHECK(proj_equal(back, q, 1e-15));
}

TEST_CASE("bezout and cde subcommands") {
    SECTION("two lines") {
        RunResult r = run_cli("bezout --curve1 x --curve2 y --stable-output");
        CHECK(r.exit_code == 0);
        Json rep = Json::parse(r.out);
        CHECK(rep["payload"]["total"] == 1);
        CHECK(rep["payload"]["points"].size() == 1);
    }
    SECTION("exact slice of the Fermat quartic") {
        RunResult r = run_cli("cde --poly fermat --sigma 1/2 --stable-output");
        CHECK(r.exit_code == 0);
        Json rep = Json::parse(r.out);
        CHECK(rep["payload"]["verdict"] == "finite");
        CHECK(rep["payload"]["points"].empty());
    }
    SECTION("numeric slice at the eighth root of unity") {
        RunResult r = run_cli("cde --poly fermat --sigma root8 --numeric --stable-output");
        CHECK(r.exit_code == 0);
        Json rep = Json::parse(r.out);
        CHECK(rep["payload"]["verdict"] == "finite");
        REQUIRE(rep["payload"]["points"].size() == 1);
    }
}

TEST_CASE("structured errors with nonzero exit") {
    RunResult r = run_cli("cde --poly \"x0^\" --sigma 1");
    CHECK(r.exit_code == 2);
    Json rep = Json::parse(r.out);
    REQUIRE(rep.contains("error"));
    CHECK(rep["error"]["kind"] == "parse");
    RunResult bad = run_cli("check-hk --trials 0");
    CHECK(bad.exit_code == 2);
    RunResult badtol = run_cli("check-hk --trials 10 --tol quaternion=-1");
    CHECK(badtol.exit_code == 2);
}

TEST_CASE("tolerance overrides change the gate") {
    RunResult r =
        run_cli("check-omega --poly fermat --samples 20 --tol pivot=1e-30 --stable-output");
    CHECK(r.exit_code == 1);  // machine-epsilon deviations cannot meet 1e-30
    Json rep = Json::parse(r.out);
    bool found = false;
    for (const auto& c : rep["checks"]) {
        if (c["name"] == "pivot-consistency") {
            found = true;
            CHECK(c["threshold"] == 1e-30);
            CHECK(c["status"] == "fail");
        }
    }
    CHECK(found);
}

TEST_CASE("every check certifies a vocabulary identity") {
    SuiteOptions opt;
    opt.seed = 3;
    opt.samples = 20;
    opt.trials = 100;
    Report rep = run_all(opt);
    REQUIRE(rep.passed());
    for (const auto& c : rep.checks) {
        INFO(c.name << " -> " << c.certifies);
        CHECK(certifies_vocabulary().count(c.certifies) == 1);
    }
}

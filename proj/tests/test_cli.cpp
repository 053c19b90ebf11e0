#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out;
};

Run qwec(const std::string& args, const std::string& env = {}) {
    const char* cli = std::getenv("QWEC_CLI");
    REQUIRE(cli != nullptr);
    const std::string cmd = env + " " + cli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("qwec_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(qwec("").status == 2);
    CHECK(qwec("frobnicate").status == 2);
    CHECK(qwec("error-sweep --family bitflip").status == 2);
    CHECK(qwec("error-sweep --target P1").status == 2);
    CHECK(qwec("logical-gates --word X").status == 2);
    CHECK(qwec("--help").status == 0);
}

TEST_CASE("verify-tables reproduces every row") {
    const Run r = qwec("verify-tables");
    CHECK(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["command"] == "verify-tables");
    CHECK(j["summary"]["pass"] == true);
    CHECK(j["summary"]["rows_reproduced"] == 15);
    bool found = false;
    for (const auto& row : j["results"][1]["rows"])
        if (row["operator"] == "+1 (I I I)_{P4} (X I I)_{P2} (I I I)_{P0}") {
            found = true;
            CHECK(row["m"] == "001111");
        }
    CHECK(found);
}

TEST_CASE("a corrupted generator produces a targeted failure") {
    const Run r = qwec("verify-tables --corrupt-generator 4");
    CHECK(r.status == 1);
    const json j = json::parse(r.out);
    CHECK(j["summary"]["pass"] == false);
    int failed = 0;
    for (const auto& row : j["results"][1]["rows"]) failed += row["pass"] == false ? 1 : 0;
    CHECK(failed > 0);
    CHECK(failed < 15);
}

TEST_CASE("zero trials give a header-only CSV") {
    const fs::path dir = scratch_dir("empty");
    const Run r = qwec("error-sweep --trials 0 --out " + (dir / "sweep.csv").string());
    CHECK(r.status == 0);
    CHECK(slurp(dir / "sweep.csv") == "trial,family,target,syndrome,fidelity\n");
    CHECK(fs::exists(dir / "sweep.json"));
}

TEST_CASE("sweeps are reproducible from the seed") {
    const fs::path dir = scratch_dir("repro");
    const std::string common = "error-sweep --trials 2 --family pauli --target P2 --seed 7 --threads 2 --out ";
    CHECK(qwec(common + (dir / "a.csv").string()).status == 0);
    CHECK(qwec(common + (dir / "b.csv").string()).status == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    json a = json::parse(slurp(dir / "a.json")), b = json::parse(slurp(dir / "b.json"));
    for (json* j : {&a, &b}) {
        j->erase("timestamp");
        (*j)["config"].erase("out");
    }
    CHECK(a == b);
    CHECK(a["summary"]["trials"] == 2);
    CHECK(a["summary"]["min_fidelity"].get<double>() >= 1 - 1e-8);
}

TEST_CASE("the output directory comes from the environment") {
    const fs::path dir = scratch_dir("env");
    const Run r = qwec("logical-gates --word Z", "QWEC_OUT_DIR=" + dir.string());
    CHECK(r.status == 0);
    const json j = json::parse(slurp(dir / "logical-gates.json"));
    CHECK(j["summary"]["pass"] == true);
    CHECK(json::parse(r.out)["pass"] == true);
}

TEST_CASE("verify-identities reports every identity and fails on the CPhase") {
    const Run r = qwec("verify-identities");
    CHECK(r.status == 1);
    const json j = json::parse(r.out);
    bool cnot = false;
    for (const auto& res : j["results"]) {
        const std::string name = res["identity"];
        if (name.rfind("coin-to-logical CNOT", 0) == 0) {
            cnot = true;
            CHECK(res["pass"] == true);
        }
        if (name.rfind("CPhase:", 0) == 0) CHECK(res["pass"] == false);
    }
    CHECK(cnot);
}

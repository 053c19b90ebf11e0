// qwec: experiment driver for the walk-compiled error-correcting code.
//   qwec verify-tables | error-sweep | verify-identities | logical-gates [options]
// Exit status: 0 all assertions pass, 1 an assertion failed, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qwec/experiments.hpp"

namespace fs = std::filesystem;
using qwec::experiments::Config;
using qwec::experiments::Report;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Resolves where the JSON (and for sweeps, CSV) artifacts go; empty when printing only.
fs::path artifact_path(const Config& c) {
    if (!c.out.empty()) return c.out;
    if (const char* dir = std::getenv("QWEC_OUT_DIR"); dir && *dir)
        return fs::path(dir) / (c.command + (c.command == "error-sweep" ? ".csv" : ".json"));
    return {};
}

void emit(const Config& c, const Report& r) {
    const std::string json_text = r.json.dump(2) + "\n";
    const fs::path path = artifact_path(c);
    if (path.empty()) {
        std::cout << json_text;
        return;
    }
    if (c.command == "error-sweep") {
        fs::path csv = path, json = path;
        if (path.extension() == ".json") csv.replace_extension(".csv");
        else json.replace_extension(".json");
        write_file(csv, r.csv);
        write_file(json, json_text);
    } else {
        write_file(path, json_text);
    }
    std::cout << r.json["summary"].dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walk-compiled quantum error correction experiments"};
    app.require_subcommand(1);

    Config config;
    std::string family = "all";
    std::string target = "all";
    std::optional<double> tolerance;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", config.seed, "64-bit RNG seed")->capture_default_str();
        sub->add_option("--out", config.out, "output path (default: $QWEC_OUT_DIR/<command>.json, else stdout)");
        sub->add_option("--tolerance", tolerance, "override the pass tolerance");
        sub->add_option("--threads", config.threads, "worker threads (0 = hardware concurrency)");
    };

    auto* tables = app.add_subcommand("verify-tables", "code basis invariants and the syndrome table");
    common(tables);
    tables->add_option("--corrupt-generator", config.corrupt_generator, "test mode: corrupt stabilizer s_k")
        ->check(CLI::Range(0, 5));

    auto* sweep = app.add_subcommand("error-sweep", "random error correctability campaign");
    common(sweep);
    sweep->add_option("--trials", config.trials, "trials per (family, target)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sweep->add_option("--family", family, "coin, shift, pauli or all")
        ->check(CLI::IsMember({"coin", "shift", "pauli", "all"}));
    sweep->add_option("--target", target, "P0, P2, P4 or all")->check(CLI::IsMember({"P0", "P2", "P4", "all"}));
    sweep->add_flag("--monte-carlo", config.monte_carlo, "sample measurement outcomes instead of summing branches");

    auto* identities = app.add_subcommand("verify-identities", "extracted-unitary and symbolic identity checks");
    common(identities);

    auto* gates = app.add_subcommand("logical-gates", "Bloch-grid check of logical gate words");
    common(gates);
    gates->add_option("--word", config.words, "gate word over H S T Z, e.g. \"T T\" (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.tolerance = tolerance;
    if (family != "all") config.families = {qwec::parse_family(family)};
    if (target != "all") config.targets = {qwec::parse_particle(target)};

    Report report;
    try {
        report = qwec::experiments::run(config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "qwec: " << e.what() << "\n";
        return kUsage;
    }
    try {
        emit(config, report);
    } catch (const std::exception& e) {
        std::cerr << "qwec: " << e.what() << "\n";
        return kFail;
    }
    return report.pass ? kPass : kFail;
}

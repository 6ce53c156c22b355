// tqkd: thresholds, curves, distillation tables and protocol simulation for
// tomographic qunit key distribution.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tqkd/tqkd.hpp"

namespace {

struct Output {
    std::string format = "csv";
    std::string path;
    int precision = tqkd::kDefaultPrecision;

    void attach(CLI::App* app) {
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--output", path, "write to this file instead of stdout");
        app->add_option("--precision", precision, "significant digits")->check(CLI::Range(1, 17));
    }
};

int emit(const tqkd::OutputRecord& rec, const Output& out) {
    const auto format = tqkd::parse_format(out.format);
    if (out.path.empty()) {
        tqkd::write_record(std::cout, rec, format, out.precision);
        return rec.exit_code;
    }
    std::ofstream file(out.path);
    if (!file) {
        std::cerr << "error: cannot write " << out.path << '\n';
        return tqkd::kExitUsage;
    }
    tqkd::write_record(file, rec, format, out.precision);
    if (!file.flush()) {
        std::cerr << "error: failed writing " << out.path << '\n';
        return tqkd::kExitUsage;
    }
    return rec.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold analysis and advantage-distillation simulation for tomographic qunit QKD"};
    app.require_subcommand(1);

    int n = 5;
    double beta0 = 0.0;
    int L = 2;
    int L_max = 20;
    std::uint64_t blocks = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    int grid = 200;
    std::string level = "quick";
    Output out;

    auto* triple = app.add_subcommand("triple-point", "ED/AD triple point, ED threshold and CK crossing");
    triple->add_option("--n", n, "alphabet size")->required();
    out.attach(triple);

    auto* curves = app.add_subcommand("curves", "sampled curves a-d of the (beta0, eta0) diagram");
    curves->add_option("--n", n, "alphabet size")->required();
    curves->add_option("--grid", grid, "samples per curve")->check(CLI::Range(2, 1'000'000));
    out.attach(curves);

    auto* table = app.add_subcommand("ad-table", "exact B_L, E_L and their ratios");
    table->add_option("--n", n, "alphabet size")->required();
    table->add_option("--beta0", beta0, "Bob's correct-symbol probability")->required();
    table->add_option("--L-max", L_max, "largest block length");
    out.attach(table);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the distillation protocol");
    sim->add_option("--n", n, "alphabet size")->required();
    sim->add_option("--beta0", beta0, "Bob's correct-symbol probability")->required();
    sim->add_option("--L", L, "block length");
    sim->add_option("--blocks", blocks, "number of blocks");
    sim->add_option("--seed", seed, "random seed");
    sim->add_option("--workers", workers, "worker threads (does not affect results)");
    out.attach(sim);

    auto* verify = app.add_subcommand("verify", "oracle cross-checks; exit 2 on failure");
    verify->add_option("--level", level, "quick or full");
    out.attach(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? tqkd::kExitOk : tqkd::kExitUsage;
    }

    try {
        if (*triple) return emit(tqkd::cmd_triple_point(n), out);
        if (*curves) return emit(tqkd::cmd_curves(n, grid), out);
        if (*table) return emit(tqkd::cmd_ad_table(n, beta0, L_max), out);
        if (*sim) return emit(tqkd::cmd_simulate(n, beta0, L, blocks, seed, workers).record, out);
        if (*verify) return emit(tqkd::cmd_verify(level), out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return tqkd::kExitUsage;
    } catch (const tqkd::size_limit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return tqkd::kExitUsage;
    }
    return tqkd::kExitUsage;
}

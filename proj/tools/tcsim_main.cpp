#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tcsim/config.hpp"
#include "tcsim/experiment.hpp"
#include "tcsim/verify.hpp"

namespace {

struct CommonArgs {
    std::string configPath;
    std::string outDir;
    std::uint64_t seed = 0;
    bool seedSet = false;
    unsigned workers = 0;
    bool workersSet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.configPath, "experiment config file")->required();
    cmd->add_option("--out", args.outDir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)")
        ->each([&args](const std::string&) { args.seedSet = true; });
    cmd->add_option("--workers", args.workers, "worker threads, 0 = hardware")
        ->each([&args](const std::string&) { args.workersSet = true; });
}

tcsim::ExperimentConfig resolve(const CommonArgs& args) {
    tcsim::ExperimentConfig cfg = tcsim::load_config(args.configPath);
    if (!args.outDir.empty()) cfg.outDir = args.outDir;
    if (args.seedSet) cfg.seed = args.seed;
    if (args.workersSet) cfg.workers = args.workers;
    if (const char* env = std::getenv("TCSIM_SEED"); env != nullptr && !args.seedSet) {
        cfg.seed = std::strtoull(env, nullptr, 10);
    }
    if (const char* env = std::getenv("TCSIM_WORKERS"); env != nullptr && !args.workersSet) {
        cfg.workers = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    return cfg;
}

int run_simulate(const CommonArgs& args) {
    const tcsim::ExperimentConfig cfg = resolve(args);
    const double eps = cfg.epsList.front();
    const tcsim::AnyModel model = tcsim::make_model(cfg.model);
    tcsim::EngineOptions opt;
    opt.steps = cfg.steps;
    opt.paths = cfg.paths;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    const tcsim::FrictionParams fp = cfg.friction(eps);
    const auto outcomes = std::visit(
        [&](const auto& m) { return tcsim::run_ensemble(m, fp, opt); }, model);
    const tcsim::EpsilonSummary summary = tcsim::summarize(outcomes, fp, opt);

    tcsim::SweepResult single;
    single.rows.push_back({});
    auto& row = single.rows.back();
    row.eps = summary.eps;
    row.primalCE = summary.primalCE;
    row.primalSe = summary.primalCESe;
    row.dualCEBound = summary.dualCE;
    row.dualSe = summary.dualCESe;
    row.leadingLoss = summary.leadingLoss;
    row.ergodicRatio = summary.ergodicRatio;
    row.tauEarlyFrac = summary.tauFrac;
    row.rho1Frac = summary.rho1Frac;
    row.rho2Frac = summary.rho2Frac;
    row.summary = summary;
    single.frictionlessCE = summary.frictionlessCE;

    std::filesystem::create_directories(cfg.outDir);
    {
        std::ofstream out(std::filesystem::path(cfg.outDir) / "run.json", std::ios::binary);
        out << tcsim::summary_json(single, cfg);
    }
    {
        std::ofstream out(std::filesystem::path(cfg.outDir) / "paths.csv", std::ios::binary);
        out << tcsim::paths_csv(outcomes, cfg.steps);
    }
    std::cout << "eps " << eps << ": primal CE " << summary.primalCE << " (se "
              << summary.primalCESe << "), dual CE bound " << summary.dualCE << " (se "
              << summary.dualCESe << ")\n";
    std::cout << "outputs in " << cfg.outDir << "\n";
    return 0;
}

int run_sweep_cmd(const CommonArgs& args) {
    const tcsim::ExperimentConfig cfg = resolve(args);
    const tcsim::SweepResult sweep = tcsim::run_sweep(cfg);
    tcsim::write_outputs(sweep, cfg);
    std::cout << tcsim::sweep_csv(sweep);
    if (sweep.slopeValid) {
        std::cout << "scaling slope: " << sweep.scalingSlope << "\n";
    }
    std::cout << "outputs in " << cfg.outDir << "\n";
    return 0;
}

int run_verify_cmd(const CommonArgs& args) {
    const tcsim::ExperimentConfig cfg = resolve(args);
    const tcsim::VerifyReport report = tcsim::run_verify(cfg);
    report.print(std::cout);
    return report.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transaction-cost portfolio simulation"};
    app.require_subcommand(1);

    CommonArgs simulateArgs, sweepArgs, verifyArgs;
    CLI::App* simulate = app.add_subcommand("simulate", "run a single spread level");
    add_common(simulate, simulateArgs);
    CLI::App* sweep = app.add_subcommand("sweep", "run the configured eps sweep");
    add_common(sweep, sweepArgs);
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
    add_common(verify, verifyArgs);

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(simulateArgs);
        if (sweep->parsed()) return run_sweep_cmd(sweepArgs);
        if (verify->parsed()) return run_verify_cmd(verifyArgs);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const tcsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

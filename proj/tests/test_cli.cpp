#include "doctest.h"

#include <string>

#include "tcsim/config.hpp"
#include "tcsim/experiment.hpp"
#include "tcsim/verify.hpp"

using namespace tcsim;

namespace {

const char* kBaseConfig = R"(
# reference experiment
[model]
kind = black-scholes
b = 0.1
sigma = 0.2
s0 = 1.0

[friction]
eps = 1e-2, 1e-3     ; descending spreads
p = 1.0
x_bank = 0.5
x_stock = 0.5
horizon = 1.0

[numerics]
steps = 400
paths = 500
seed = 99
workers = 2

[output]
dir = out
formats = csv,json
)";

} // namespace

TEST_CASE("config parsing round trip") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    CHECK(cfg.model.kind == "black-scholes");
    CHECK(cfg.model.b == doctest::Approx(0.1));
    CHECK(cfg.epsList.size() == 2);
    CHECK(cfg.epsList[0] == doctest::Approx(1e-2));
    CHECK(cfg.epsList[1] == doctest::Approx(1e-3));
    CHECK(cfg.steps == 400);
    CHECK(cfg.paths == 500);
    CHECK(cfg.seed == 99);
    CHECK(cfg.asymptotic == true);
}

TEST_CASE("missing and malformed fields are reported by name") {
    std::string noSigma = kBaseConfig;
    noSigma.replace(noSigma.find("sigma = 0.2"), 11, "           ");
    try {
        parse_config(noSigma);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.sigma") != std::string::npos);
    }

    std::string badEps = kBaseConfig;
    badEps.replace(badEps.find("eps = 1e-2, 1e-3"), 16, "eps = 1e-2, zzzz");
    try {
        parse_config(badEps);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("friction.eps") != std::string::npos);
    }

    std::string negEps = kBaseConfig;
    negEps.replace(negEps.find("eps = 1e-2, 1e-3"), 16, "eps = 1e-2, -1-3");
    CHECK_THROWS_AS(parse_config(negEps), ConfigError);
}

TEST_CASE("eps list must be sorted; ascending input is normalized descending") {
    std::string ascending = kBaseConfig;
    ascending.replace(ascending.find("eps = 1e-2, 1e-3"), 16, "eps = 1e-3, 1e-2");
    const ExperimentConfig cfg = parse_config(ascending);
    CHECK(cfg.epsList[0] == doctest::Approx(1e-2));
    CHECK(cfg.epsList[1] == doctest::Approx(1e-3));

    std::string unsorted = kBaseConfig;
    unsorted.replace(unsorted.find("eps = 1e-2, 1e-3"), 16, "eps = 1e-3, 1e-2, 1e-4 ");
    CHECK_THROWS_AS(parse_config(unsorted), ConfigError);
}

TEST_CASE("model constructor failures surface as config errors") {
    std::string zeroDrift = kBaseConfig;
    zeroDrift.replace(zeroDrift.find("b = 0.1"), 7, "b = 0.0");
    CHECK_THROWS_AS(parse_config(zeroDrift), ConfigError);
}

TEST_CASE("sweep output is byte-identical across reruns and worker counts") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const SweepResult first = run_sweep(cfg);
    const SweepResult second = run_sweep(cfg);
    CHECK(sweep_csv(first) == sweep_csv(second));
    CHECK(summary_json(first, cfg) == summary_json(second, cfg));

    ExperimentConfig oneWorker = cfg;
    oneWorker.workers = 1;
    const SweepResult third = run_sweep(oneWorker);
    CHECK(sweep_csv(first) == sweep_csv(third));
}

TEST_CASE("csv columns match the documented schema") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const SweepResult sweep = run_sweep(cfg);
    const std::string csv = sweep_csv(sweep);
    CHECK(csv.rfind("eps,primal_ce,primal_se,dual_ce_bound,dual_se,leading_loss,"
                    "ergodic_ratio,tau_early_frac,rho1_frac,rho2_frac\n",
                    0) == 0);
    // One line per eps plus the header.
    std::size_t lines = 0;
    for (char c : csv) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 1 + cfg.epsList.size());
}

TEST_CASE("sweep rows keep the duality sandwich within noise") {
    const ExperimentConfig cfg = parse_config(kBaseConfig);
    const SweepResult sweep = run_sweep(cfg);
    for (const auto& row : sweep.rows) {
        CHECK(row.dualCEBound >= row.primalCE - 3.0 * (row.primalSe + row.dualSe));
        CHECK(row.summary.leadingLoss > 0.0);
    }
    // Monotone leading loss down the descending eps list.
    for (std::size_t i = 0; i + 1 < sweep.rows.size(); ++i) {
        CHECK(sweep.rows[i].leadingLoss > sweep.rows[i + 1].leadingLoss);
    }
}

TEST_CASE("stoch-vol config parses with its extra fields") {
    std::string sv = kBaseConfig;
    sv.replace(sv.find("kind = black-scholes"), 20, "kind = stoch-vol    ");
    sv += "\n[model]\nb1 = 0.03\nsigma1 = 0.05\nkappa = 2.0\nsigma_y = 0.4\n";
    const ExperimentConfig cfg = parse_config(sv);
    CHECK(cfg.model.kind == "stoch-vol");
    CHECK(cfg.model.b1 == doctest::Approx(0.03));
    const AnyModel model = make_model(cfg.model);
    CHECK(std::holds_alternative<StochVolModel>(model));
}

TEST_CASE("verify report: warnings do not fail, hard failures do") {
    VerifyReport report;
    report.checks.push_back({"ok", true, false, 0.1, ""});
    CHECK(report.exit_code() == 0);
    // An out-of-regime asymptotic check only warns.
    report.checks.push_back({"asymptotic-miss", false, true, 1.5, ""});
    CHECK(report.all_pass());
    CHECK(report.exit_code() == 0);
    report.checks.push_back({"hard-miss", false, false, 2.0, ""});
    CHECK_FALSE(report.all_pass());
    CHECK(report.exit_code() == 1);
}

TEST_CASE("canonical configs are valid") {
    CHECK_NOTHROW(make_model(default_bs_config().model));
    CHECK_NOTHROW(make_model(sv_constant_config().model));
    CHECK_NOTHROW(make_model(sv_generic_config().model));
    CHECK(std::get<StochVolModel>(make_model(sv_constant_config().model))
              .constant_coefficients());
}

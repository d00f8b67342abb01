#include "tcsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "tcsim/metrics.hpp"
#include "vendor_json.hpp"

namespace tcsim {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void check_finite(const EpsilonSummary& s) {
    const double probe[] = {s.y,        s.primalU,  s.primalCE,     s.dualU,       s.dualCE,
                            s.leadingLoss, s.ergodicRatio, s.zbarMean, s.zbarM2, s.lossFormula};
    for (double v : probe) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("run_sweep: non-finite result at eps = " + fmt(s.eps));
        }
    }
}

SweepRow to_row(const EpsilonSummary& s) {
    SweepRow row;
    row.eps = s.eps;
    row.primalCE = s.primalCE;
    row.primalSe = s.primalCESe;
    row.dualCEBound = s.dualCE;
    row.dualSe = s.dualCESe;
    row.leadingLoss = s.leadingLoss;
    row.ergodicRatio = s.ergodicRatio;
    row.tauEarlyFrac = s.tauFrac;
    row.rho1Frac = s.rho1Frac;
    row.rho2Frac = s.rho2Frac;
    row.summary = s;
    return row;
}

} // namespace

EpsilonSummary run_single(const ExperimentConfig& cfg, double eps) {
    const AnyModel model = make_model(cfg.model);
    EngineOptions opt;
    opt.steps = cfg.steps;
    opt.paths = cfg.paths;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    const FrictionParams fp = cfg.friction(eps);
    const EpsilonSummary s = std::visit(
        [&](const auto& m) { return run_epsilon(m, fp, opt); }, model);
    check_finite(s);
    return s;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    SweepResult out;
    out.rows.reserve(cfg.epsList.size());
    for (double eps : cfg.epsList) {
        out.rows.push_back(to_row(run_single(cfg, eps)));
    }
    if (!out.rows.empty()) {
        out.frictionlessCE = out.rows.front().summary.frictionlessCE;
    }
    std::vector<double> epsV, lossV;
    for (const auto& row : out.rows) {
        const double loss = row.summary.frictionlessCE - row.primalCE;
        if (loss > 0.0) {
            epsV.push_back(row.eps);
            lossV.push_back(loss);
        }
    }
    if (epsV.size() >= 2) {
        out.scalingSlope = eps_scaling_fit(epsV, lossV);
        out.slopeValid = true;
    }
    return out;
}

std::string sweep_csv(const SweepResult& result) {
    std::string csv =
        "eps,primal_ce,primal_se,dual_ce_bound,dual_se,leading_loss,"
        "ergodic_ratio,tau_early_frac,rho1_frac,rho2_frac\n";
    for (const auto& r : result.rows) {
        csv += fmt(r.eps) + "," + fmt(r.primalCE) + "," + fmt(r.primalSe) + "," +
               fmt(r.dualCEBound) + "," + fmt(r.dualSe) + "," + fmt(r.leadingLoss) + "," +
               fmt(r.ergodicRatio) + "," + fmt(r.tauEarlyFrac) + "," + fmt(r.rho1Frac) + "," +
               fmt(r.rho2Frac) + "\n";
    }
    return csv;
}

std::string summary_json(const SweepResult& result, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["model"] = cfg.model.kind;
    j["paths"] = cfg.paths;
    j["steps"] = cfg.steps;
    j["seed"] = cfg.seed;
    j["frictionless_ce"] = result.frictionlessCE;
    if (result.slopeValid) {
        j["scaling_slope"] = result.scalingSlope;
    } else {
        j["scaling_slope"] = nullptr;
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : result.rows) {
        nlohmann::ordered_json row;
        row["eps"] = r.eps;
        row["primal_ce"] = r.primalCE;
        row["primal_se"] = r.primalSe;
        row["dual_ce_bound"] = r.dualCEBound;
        row["dual_se"] = r.dualSe;
        row["leading_loss"] = r.leadingLoss;
        row["loss_formula"] = r.summary.lossFormula;
        row["ergodic_ratio"] = r.ergodicRatio;
        row["tau_early_frac"] = r.tauEarlyFrac;
        row["rho1_frac"] = r.rho1Frac;
        row["rho2_frac"] = r.rho2Frac;
        row["zbar_mean"] = r.summary.zbarMean;
        row["zbar_second_moment"] = r.summary.zbarM2;
        row["dual_moment_ref"] = r.summary.dualMomentRef;
        row["theta_dev_ratio"] = r.summary.thetaDevRatio;
        row["coarse_frac"] = r.summary.coarseFrac;
        row["min_wealth"] = r.summary.minXWorst;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string paths_csv(const std::vector<PathOutcome>& outcomes, std::size_t steps) {
    std::string csv = "path,x_T,f_T,tau_idx,rho1_idx,rho2_idx,zbar_T,min_x,q_weight\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        const auto idx = [steps](std::uint32_t v) {
            return v < steps ? fmt(static_cast<double>(v)) : std::string("-");
        };
        csv += std::to_string(i) + "," + fmt(o.XT) + "," + fmt(o.FT) + "," + idx(o.tauIdx) + "," +
               idx(o.rho1Idx) + "," + idx(o.rho2Idx) + "," + fmt(o.zbarT) + "," + fmt(o.minX) +
               "," + fmt(o.u) + "\n";
    }
    return csv;
}

void write_outputs(const SweepResult& result, const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.outDir);
    for (const auto& format : cfg.formats) {
        if (format == "csv") {
            std::ofstream out(fs::path(cfg.outDir) / "sweep.csv", std::ios::binary);
            out << sweep_csv(result);
        } else if (format == "json") {
            std::ofstream out(fs::path(cfg.outDir) / "summary.json", std::ios::binary);
            out << summary_json(result, cfg);
        }
    }
}

} // namespace tcsim

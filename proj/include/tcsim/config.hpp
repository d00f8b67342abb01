#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tcsim/models.hpp"

namespace tcsim {

/// Configuration problems carry the offending "section.key" in the message.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    std::string kind; // "black-scholes" | "stoch-vol"
    double b = 0.0;
    double sigma = 0.0;
    double s0 = 1.0;
    // stoch-vol extras; b and sigma double as b0 and sigma0
    double b1 = 0.0;
    double sigma1 = 0.0;
    double kappa = 0.0;
    double meanY = 0.0;
    double sigmaY = 0.0;
    double y0 = 0.0;
};

struct ExperimentConfig {
    ModelConfig model;
    std::vector<double> epsList; // strictly positive, stored descending
    double p = 1.0;
    double xB = 0.0;
    double xS = 0.0;
    double horizon = 1.0;
    bool asymptotic = true; // when false, asymptotic checks downgrade to warnings
    std::size_t steps = 10000;
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string outDir = "out";
    std::vector<std::string> formats = {"csv", "json"};

    FrictionParams friction(double eps) const;
};

using AnyModel = std::variant<BlackScholesModel, StochVolModel>;

/// Builds and validates the model described by the config.
AnyModel make_model(const ModelConfig& mc);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// The canonical Black-Scholes setup the acceptance suite runs on.
ExperimentConfig default_bs_config();
/// Constant-coefficient stochastic-vol twin of the default config.
ExperimentConfig sv_constant_config();
/// A generic stochastic-vol setup with moving coefficients.
ExperimentConfig sv_generic_config();

} // namespace tcsim

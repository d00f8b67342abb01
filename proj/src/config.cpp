#include "tcsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace tcsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap read_ini(const std::string& text) {
    SectionMap sections;
    std::istringstream in(text);
    std::string line;
    std::string current;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(lineNo) + ": unterminated section header");
            }
            current = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineNo) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (current.empty()) {
            throw ConfigError("config line " + std::to_string(lineNo) + ": key outside any section");
        }
        sections[current][key] = value;
    }
    return sections;
}

class Fields {
public:
    Fields(const SectionMap& map, std::string section) : map_(map), section_(std::move(section)) {}

    bool has(const std::string& key) const {
        const auto sec = map_.find(section_);
        return sec != map_.end() && sec->second.count(key) > 0;
    }

    std::string raw(const std::string& key) const {
        const auto sec = map_.find(section_);
        if (sec == map_.end() || sec->second.count(key) == 0) {
            throw ConfigError(section_ + "." + key + ": missing");
        }
        return sec->second.at(key);
    }

    double number(const std::string& key) const {
        const std::string v = raw(key);
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ConfigError(section_ + "." + key + ": not a number: '" + v + "'");
        }
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::uint64_t integer(const std::string& key) const {
        const std::string v = raw(key);
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v, &pos);
            if (pos != v.size() || x < 0) throw std::invalid_argument("bad integer");
            return static_cast<std::uint64_t>(x);
        } catch (const std::exception&) {
            throw ConfigError(section_ + "." + key + ": not a nonnegative integer: '" + v + "'");
        }
    }

    std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? integer(key) : fallback;
    }

    bool flag_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        std::string v = raw(key);
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw ConfigError(section_ + "." + key + ": not a boolean: '" + v + "'");
    }

    std::vector<double> number_list(const std::string& key) const {
        const std::string v = raw(key);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ConfigError(section_ + "." + key + ": not a number list: '" + v + "'");
            }
        }
        if (out.empty()) {
            throw ConfigError(section_ + "." + key + ": empty list");
        }
        return out;
    }

    std::vector<std::string> string_list_or(const std::string& key,
                                            std::vector<std::string> fallback) const {
        if (!has(key)) return fallback;
        std::vector<std::string> out;
        std::stringstream ss(raw(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

private:
    const SectionMap& map_;
    std::string section_;
};

} // namespace

FrictionParams ExperimentConfig::friction(double eps) const {
    FrictionParams fp;
    fp.eps = eps;
    fp.p = p;
    fp.xB = xB;
    fp.xS = xS;
    fp.horizon = horizon;
    return fp;
}

AnyModel make_model(const ModelConfig& mc) {
    try {
        if (mc.kind == "black-scholes") {
            return BlackScholesModel(mc.b, mc.sigma, mc.s0);
        }
        if (mc.kind == "stoch-vol") {
            StochVolModel::Params par;
            par.b0 = mc.b;
            par.b1 = mc.b1;
            par.sigma0 = mc.sigma;
            par.sigma1 = mc.sigma1;
            par.kappa = mc.kappa;
            par.meanY = mc.meanY;
            par.sigmaY = mc.sigmaY;
            par.s0 = mc.s0;
            par.y0 = mc.y0;
            return StochVolModel(par);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("model.kind: expected 'black-scholes' or 'stoch-vol', got '" + mc.kind + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    const SectionMap map = read_ini(text);
    const Fields model(map, "model");
    const Fields friction(map, "friction");
    const Fields numerics(map, "numerics");
    const Fields output(map, "output");

    ExperimentConfig cfg;
    cfg.model.kind = model.raw("kind");
    cfg.model.b = model.number("b");
    cfg.model.sigma = model.number("sigma");
    cfg.model.s0 = model.number_or("s0", 1.0);
    if (cfg.model.kind == "stoch-vol") {
        cfg.model.b1 = model.number_or("b1", 0.0);
        cfg.model.sigma1 = model.number_or("sigma1", 0.0);
        cfg.model.kappa = model.number_or("kappa", 1.0);
        cfg.model.meanY = model.number_or("mean_y", 0.0);
        cfg.model.sigmaY = model.number_or("sigma_y", 0.0);
        cfg.model.y0 = model.number_or("y0", 0.0);
    }
    make_model(cfg.model); // validate eagerly

    cfg.epsList = friction.number_list("eps");
    for (double e : cfg.epsList) {
        if (!(e > 0.0 && e < 1.0)) {
            throw ConfigError("friction.eps: every entry must lie in (0, 1)");
        }
    }
    const bool increasing =
        std::is_sorted(cfg.epsList.begin(), cfg.epsList.end(), std::less<double>());
    const bool decreasing =
        std::is_sorted(cfg.epsList.begin(), cfg.epsList.end(), std::greater<double>());
    if (cfg.epsList.size() > 1 && !increasing && !decreasing) {
        throw ConfigError("friction.eps: list must be sorted");
    }
    if (increasing) {
        std::reverse(cfg.epsList.begin(), cfg.epsList.end());
    }
    if (std::adjacent_find(cfg.epsList.begin(), cfg.epsList.end()) != cfg.epsList.end()) {
        throw ConfigError("friction.eps: duplicate entries");
    }

    cfg.p = friction.number("p");
    cfg.xB = friction.number_or("x_bank", 0.0);
    cfg.xS = friction.number_or("x_stock", 0.0);
    cfg.horizon = friction.number("horizon");
    cfg.asymptotic = friction.flag_or("asymptotic", true);
    if (!(cfg.p > 0.0)) throw ConfigError("friction.p: must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("friction.horizon: must be positive");

    cfg.steps = numerics.integer_or("steps", 10000);
    cfg.paths = numerics.integer_or("paths", 10000);
    cfg.seed = numerics.integer_or("seed", 1);
    cfg.workers = static_cast<unsigned>(numerics.integer_or("workers", 0));
    if (cfg.steps < 2) throw ConfigError("numerics.steps: must be at least 2");
    if (cfg.paths < 1) throw ConfigError("numerics.paths: must be at least 1");

    cfg.outDir = output.has("dir") ? output.raw("dir") : cfg.outDir;
    cfg.formats = output.string_list_or("formats", cfg.formats);
    for (const auto& f : cfg.formats) {
        if (f != "csv" && f != "json") {
            throw ConfigError("output.formats: unknown format '" + f + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentConfig default_bs_config() {
    // A drift/vol/horizon combination for which the eps^{2/3} term dominates
    // the one-off O(eps) liquidation cost over the whole sweep while the
    // corridor stays resolved at n = 1e5 for the smallest eps. The endowment
    // starts at the frictionless optimum pi = b/(p sigma^2) = 0.1.
    ExperimentConfig cfg;
    cfg.model.kind = "black-scholes";
    cfg.model.b = 0.036;
    cfg.model.sigma = 0.6;
    cfg.model.s0 = 1.0;
    cfg.epsList = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    cfg.p = 1.0;
    cfg.xB = 0.9;
    cfg.xS = 0.1;
    cfg.horizon = 15.0;
    cfg.steps = 20000;
    cfg.paths = 100000;
    cfg.seed = 20240901;
    return cfg;
}

ExperimentConfig sv_constant_config() {
    ExperimentConfig cfg = default_bs_config();
    cfg.model.kind = "stoch-vol";
    cfg.model.b1 = 0.0;
    cfg.model.sigma1 = 0.0;
    cfg.model.kappa = 2.0;
    cfg.model.meanY = 0.0;
    cfg.model.sigmaY = 0.5;
    cfg.model.y0 = 0.0;
    return cfg;
}

ExperimentConfig sv_generic_config() {
    ExperimentConfig cfg = default_bs_config();
    cfg.model.kind = "stoch-vol";
    cfg.model.b = 0.036;
    cfg.model.b1 = 0.012;
    cfg.model.sigma = 0.6;
    cfg.model.sigma1 = 0.12;
    cfg.model.kappa = 2.0;
    cfg.model.meanY = 0.0;
    cfg.model.sigmaY = 0.5;
    cfg.model.y0 = 0.0;
    cfg.epsList = {1e-2, 3e-3, 1e-3};
    return cfg;
}

} // namespace tcsim

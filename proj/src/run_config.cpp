#include "drop/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace drop {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double_pi(const std::string& text, const std::string& key) {
    std::string t = trim(text);
    double mult = 1.0;
    if (t.size() >= 2 && (t.ends_with("pi") || t.ends_with("PI"))) {
        mult = kPi;
        t = trim(t.substr(0, t.size() - 2));
        if (t.empty() || t == "-") t += "1";
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v * mult;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': cannot parse number from '" + text + "'");
    }
}

const std::vector<std::pair<std::string, std::string>>& RunConfig::known_keys() {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"n", "spatial dimension (default 2)"},
        {"N", "grid points per axis, even (default 256)"},
        {"T", "periodic box side length (default 20pi)"},
        {"alpha", "Riesz exponent in (0, n)"},
        {"beta", "confining potential exponent (default 1)"},
        {"A", "confining potential amplitude (default 0)"},
        {"epsilon", "interface width; 'auto' = 0.45*T/N (default auto)"},
        {"kappa_w", "perimeter calibration factor (default 4/pi)"},
        {"cm", "repulsion multiplier; runs at unit mass"},
        {"mass", "physical mass; repulsion multiplier 1"},
        {"omega_shape", "support box: square | disk | none (default square)"},
        {"omega_diagonal", "square diagonal length (default pi)"},
        {"omega_diameter", "disk diameter (default pi)"},
        {"max_iters", "optimizer iteration cap (default 3000)"},
        {"grad_tol", "projected-gradient-step stationarity tolerance (default 1e-7)"},
        {"vol_tol", "relative volume tolerance (default 1e-10)"},
        {"step0", "initial step size (default 1)"},
        {"backtrack_factor", "line-search shrink factor in (0,1) (default 0.5)"},
        {"armijo_c", "Armijo constant in (0,1) (default 1e-4)"},
        {"seed", "RNG seed (default 0)"},
        {"init_mode", "uniform_noise | ball_seed | file (default uniform_noise)"},
        {"init_file", "PFLD path for init_mode = file"},
        {"init_center", "comma-separated ball_seed center (default origin)"},
        {"restarts", "multi-start count with distinct seeds (default 1)"},
        {"checkpoint_every", "write PFLD checkpoint every K iterations (default 0 = off)"},
        {"threshold", "level for the threshold set (default 0.5)"},
        {"out_dir", "output directory (default $DROPSIM_OUTPUT_ROOT/<subcommand>)"},
        {"cm_list", "sweep: comma-separated repulsion multipliers"},
        {"mass_list", "sweep / ball-energy: comma-separated masses"},
        {"workers", "sweep: parallel worker slots (default 1)"},
        {"t_list", "t-table: comma-separated box sizes (default 5pi,10pi,20pi)"},
        {"quad_abs_tol", "ball oracle quadrature tolerance (default 1e-7)"},
        {"v_unit", "unit-radius ball Riesz energy; 'auto' = quadrature oracle"},
        {"k_max", "stability: mode truncation index (default 200)"},
        {"gamma_max", "stability: scan bound (default auto)"},
        {"atlas_gamma_samples", "stability: atlas CSV gamma resolution (default 200)"},
        {"atlas_k_max", "stability: atlas CSV highest mode (default 10)"},
        {"a_list", "stability: comma-separated A values for the m*-vs-A table"},
        {"k_table_max", "critical-mass: table rows (default 10)"},
    };
    return keys;
}

namespace {
bool key_known(const std::string& k) {
    const auto& keys = RunConfig::known_keys();
    return std::any_of(keys.begin(), keys.end(), [&](const auto& p) { return p.first == k; });
}
}  // namespace

void RunConfig::load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key_known(key))
            throw config_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        values_[key] = value;
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!key_known(key)) throw config_error("unknown config key '" + key + "'");
    values_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string RunConfig::get_string(const std::string& key, const std::string& def) const {
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

double RunConfig::get_double(const std::string& key, double def) const {
    const auto it = values_.find(key);
    return it == values_.end() ? def : parse_double_pi(it->second, key);
}

int RunConfig::get_int(const std::string& key, int def) const {
    const double v = get_double(key, def);
    return static_cast<int>(std::llround(v));
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t def) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': cannot parse unsigned integer");
    }
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = values_.find(key);
    if (it == values_.end()) return out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double_pi(item, key));
    }
    return out;
}

double RunConfig::require_double(const std::string& key) const {
    if (!has(key)) throw config_error("missing mandatory key '" + key + "'");
    return get_double(key, 0.0);
}

GridSpec RunConfig::grid() const {
    GridSpec g;
    g.n = get_int("n", 2);
    g.N = get_int("N", 256);
    g.T = get_double("T", 20.0 * kPi);
    g.validate();
    return g;
}

std::vector<std::uint8_t> RunConfig::omega_mask(const GridSpec& g) const {
    const std::string shape = get_string("omega_shape", "square");
    std::vector<std::uint8_t> mask(g.num_nodes(), 1);
    if (shape == "none") return mask;

    std::vector<double> probe;
    if (shape == "square") {
        // hypercube with the given diagonal, axis-aligned, centered at 0
        const double diag = get_double("omega_diagonal", kPi);
        const double half_side = diag / (2.0 * std::sqrt(static_cast<double>(g.n)));
        std::vector<double> tmp;
        fill_nodes(g, tmp, [&](const std::vector<double>& x) {
            for (double xi : x)
                if (std::abs(xi) > half_side) return 0.0;
            return 1.0;
        });
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = tmp[i] != 0.0;
    } else if (shape == "disk") {
        const double radius = get_double("omega_diameter", kPi) / 2.0;
        std::vector<double> tmp;
        fill_nodes(g, tmp, [&](const std::vector<double>& x) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return r2 <= radius * radius ? 1.0 : 0.0;
        });
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = tmp[i] != 0.0;
    } else {
        throw config_error("omega_shape must be square, disk or none (got '" + shape + "')");
    }
    return mask;
}

EnergyParams RunConfig::energy_params(const GridSpec& g) const {
    EnergyParams p;
    p.alpha = require_double("alpha");
    p.beta = get_double("beta", 1.0);
    p.A = get_double("A", 0.0);
    p.kappa_w = get_double("kappa_w", 4.0 / kPi);

    const std::string eps = get_string("epsilon", "auto");
    p.epsilon = (eps == "auto") ? 0.45 * g.h() : parse_double_pi(eps, "epsilon");

    const bool has_cm = has("cm"), has_mass = has("mass");
    if (has_cm && has_mass) throw config_error("set either 'cm' or 'mass', not both");
    if (!has_cm && !has_mass) throw config_error("missing mandatory key 'cm' (or 'mass')");
    if (has_cm) {
        p.repulsion_multiplier = require_double("cm");
        p.mass = 1.0;
    } else {
        p.repulsion_multiplier = 1.0;
        p.mass = require_double("mass");
    }
    p.validate(g.n);
    return p;
}

OptimizerConfig RunConfig::optimizer_config() const {
    OptimizerConfig c;
    c.max_iters = get_int("max_iters", 3000);
    c.grad_tol = get_double("grad_tol", 1e-7);
    c.vol_tol = get_double("vol_tol", 1e-10);
    c.step0 = get_double("step0", 1.0);
    c.backtrack_factor = get_double("backtrack_factor", 0.5);
    c.armijo_c = get_double("armijo_c", 1e-4);
    c.seed = get_u64("seed", 0);
    const std::string mode = get_string("init_mode", "uniform_noise");
    if (mode == "uniform_noise")
        c.init_mode = InitMode::uniform_noise;
    else if (mode == "ball_seed")
        c.init_mode = InitMode::ball_seed;
    else if (mode == "file")
        c.init_mode = InitMode::file;
    else
        throw config_error("init_mode must be uniform_noise, ball_seed or file");
    c.init_file = get_string("init_file", "");
    if (c.init_mode == InitMode::file && c.init_file.empty())
        throw config_error("missing mandatory key 'init_file' for init_mode = file");
    c.ball_center = get_double_list("init_center");
    c.restarts = get_int("restarts", 1);
    c.checkpoint_every = get_int("checkpoint_every", 0);
    c.validate();
    return c;
}

StabilityParams RunConfig::stability_params() const {
    StabilityParams p;
    p.n = get_int("n", 2);
    p.alpha = require_double("alpha");
    p.beta = require_double("beta");
    p.A = require_double("A");
    p.k_max = get_int("k_max", 200);
    p.gamma_max = get_double("gamma_max", 0.0);
    p.validate();
    return p;
}

double RunConfig::threshold() const { return get_double("threshold", 0.5); }

void RunConfig::note_resolved(const std::string& key, const std::string& value) {
    derived_[key] = value;
}

std::string RunConfig::resolved_snapshot() const {
    std::ostringstream os;
    os << "# resolved configuration\n";
    for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
    for (const auto& [k, v] : derived_) os << k << " = " << v << "  # resolved\n";
    return os.str();
}

}  // namespace drop

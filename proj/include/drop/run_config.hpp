#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drop/energy.hpp"
#include "drop/grid.hpp"
#include "drop/optimizer.hpp"
#include "drop/stability.hpp"

namespace drop {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value configuration ('#' comments, UTF-8). Unknown keys are
/// rejected; values may carry a trailing "pi" multiplier (e.g. T = 20pi).
class RunConfig {
  public:
    static const std::vector<std::pair<std::string, std::string>>& known_keys();

    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value);  // flag override
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
    std::vector<double> get_double_list(const std::string& key) const;
    double require_double(const std::string& key) const;

    /// Typed views over the map (defaults applied, cross-field rules checked).
    GridSpec grid() const;
    std::vector<std::uint8_t> omega_mask(const GridSpec& g) const;
    EnergyParams energy_params(const GridSpec& g) const;
    OptimizerConfig optimizer_config() const;
    StabilityParams stability_params() const;
    double threshold() const;

    std::string resolved_snapshot() const;  // every resolved key, sorted
    const std::map<std::string, std::string>& raw() const { return values_; }

    /// Records a derived value so it appears in the resolved snapshot.
    void note_resolved(const std::string& key, const std::string& value);

  private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> derived_;
};

double parse_double_pi(const std::string& text, const std::string& key);

}  // namespace drop

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cerg/sim.hpp"

namespace cerg::cli {

/// Parse failure with the offending line recorded; maps to exit code 2.
class ScenarioParseError : public std::runtime_error {
  public:
    ScenarioParseError(const std::string& path, int line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

/// A parsed scenario file. `scenario` carries the gains of the file's declared
/// mode; the per-mode gain sets stay available so a comparison can run both
/// controllers from one file.
struct ScenarioDoc {
    Scenario scenario;
    ControlMode mode = ControlMode::Joint;
    std::optional<GainConfig> joint_gains;
    std::optional<GainConfig> task_gains;
    std::string stem;        ///< output basename, default: scenario file stem
    std::string out_dir;     ///< from [output] dir, may be empty
    bool plots = false;

    /// Copy of `scenario` driven by the other controller; throws
    /// std::invalid_argument when that gain set is absent from the file.
    Scenario with_mode(ControlMode m) const;
};

/// Load and validate a scenario file. Unknown sections or keys, missing
/// required keys, and malformed values raise ScenarioParseError with the line
/// number; semantically inadmissible values raise std::invalid_argument.
ScenarioDoc load_scenario_file(const std::string& path);

/// Parse one scalar, accepting plain floating point plus the literal forms
/// pi, -pi, pi/N, pi*N used for angles. Throws std::invalid_argument.
double parse_scalar(const std::string& token);

}  // namespace cerg::cli

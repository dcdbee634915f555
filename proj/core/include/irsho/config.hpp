#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "irsho/ho_engine.hpp"

// Configuration boundary: run parameters in the units a config file quotes
// (densities per km^2, power in dBm, frequency in GHz, thresholds in dB,
// timers in ms or s). Every key name carries its unit so a file can never be
// misread; conversion to the SI/linear units the library computes in happens
// exactly once, in to_engine_config().
namespace irsho {

// Raised on malformed or invalid configuration input. The message names the
// offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double lambda_b_per_km2 = 10.0;   // base-station density
  double lambda_r_per_km2 = 1000.0; // reflecting-surface density
  double p_t_dbm = 40.0;            // transmit power
  double f_c_ghz = 3.0;             // carrier frequency
  double alpha = 4.0;               // path-loss exponent
  // Serving radius, given either directly in meters or as the equivalent
  // serving threshold in dB (each determines the other through the array
  // gain). A config file may set at most one; with neither, d_m = 50.
  std::optional<double> d_m = 50.0;
  std::optional<double> gamma_irs_db;
  int n_elements = 100;             // reflecting elements per surface
  double v_mps = 20.0;              // user speed
  double t_d_ms = 10.0;             // measurement period
  double gamma_ho_db = 0.0;         // handover trigger margin
  double t_t_ms = 480.0;            // trigger sustain time
  double t_p_s = 1.0;               // ping-pong observation window end
  double q_out_db = -8.0;           // outage threshold
  std::optional<double> r_o_m;      // serving-BS offset override (signed)
  std::optional<double> r_t_m;      // neighbor-BS offset override (signed)
  std::optional<double> l_m;        // trajectory span override
  std::uint64_t seed = 1;           // Monte Carlo stream seed
  long long n_trials = 10000;       // Monte Carlo trials
};

// Field-level validation; throws ConfigError naming the first bad field.
void validate(const RunConfig& rc);

// Parse a JSON object with RunConfig key names. Missing keys keep their
// defaults; unknown keys are errors (unit-bearing names exist precisely so a
// typo cannot silently change units). Throws ConfigError on malformed JSON,
// wrong types, unknown keys, or failed validation.
RunConfig parse_run_config(const std::string& json_text);

// parse_run_config over the contents of `path`; ConfigError if unreadable.
RunConfig load_run_config(const std::string& path);

// Serialize back to JSON with the same key names (emits whichever of
// d_m/gamma_irs_db is set). parse_run_config(to_json(rc)) reproduces rc.
std::string to_json(const RunConfig& rc);

// Convert to the engine's SI/linear units and build the walk geometry.
// Throws ConfigError on invalid input (including gamma_irs_db with
// n_elements = 0, which leaves no array gain to invert).
EngineConfig to_engine_config(const RunConfig& rc);

}  // namespace irsho

#include "irsho/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "irsho/units.hpp"

namespace irsho {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void require_finite(const std::string& field, double v) {
  if (!std::isfinite(v)) fail(field, "must be finite");
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

long long get_integer(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<long long>();
}

std::uint64_t get_u64(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const long long s = v.get<long long>();
    if (s < 0) fail(key, "must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  fail(key, "expected an integer");
}

}  // namespace

void validate(const RunConfig& rc) {
  require_finite("lambda_b_per_km2", rc.lambda_b_per_km2);
  if (rc.lambda_b_per_km2 <= 0.0) fail("lambda_b_per_km2", "must be > 0");
  require_finite("lambda_r_per_km2", rc.lambda_r_per_km2);
  if (rc.lambda_r_per_km2 < 0.0) fail("lambda_r_per_km2", "must be >= 0");
  require_finite("p_t_dbm", rc.p_t_dbm);
  require_finite("f_c_ghz", rc.f_c_ghz);
  if (rc.f_c_ghz <= 0.0) fail("f_c_ghz", "must be > 0");
  require_finite("alpha", rc.alpha);
  if (rc.alpha <= 2.0) fail("alpha", "must be > 2");
  if (rc.d_m && rc.gamma_irs_db)
    fail("d_m", "set either d_m or gamma_irs_db, not both");
  if (!rc.d_m && !rc.gamma_irs_db)
    fail("d_m", "one of d_m or gamma_irs_db must be set");
  if (rc.d_m) {
    require_finite("d_m", *rc.d_m);
    if (*rc.d_m <= 0.0) fail("d_m", "must be > 0");
  }
  if (rc.gamma_irs_db) {
    require_finite("gamma_irs_db", *rc.gamma_irs_db);
    if (rc.n_elements == 0)
      fail("gamma_irs_db", "requires n_elements > 0 (no array gain to invert)");
  }
  if (rc.n_elements < 0) fail("n_elements", "must be >= 0");
  require_finite("v_mps", rc.v_mps);
  if (rc.v_mps <= 0.0) fail("v_mps", "must be > 0");
  require_finite("t_d_ms", rc.t_d_ms);
  if (rc.t_d_ms <= 0.0) fail("t_d_ms", "must be > 0");
  require_finite("gamma_ho_db", rc.gamma_ho_db);
  require_finite("t_t_ms", rc.t_t_ms);
  if (rc.t_t_ms < rc.t_d_ms) fail("t_t_ms", "must be >= t_d_ms");
  require_finite("t_p_s", rc.t_p_s);
  if (rc.t_p_s <= units::ms_to_s(rc.t_t_ms)) fail("t_p_s", "must exceed t_t_ms");
  require_finite("q_out_db", rc.q_out_db);
  if (rc.q_out_db >= 0.0) fail("q_out_db", "must be < 0 dB");
  if (rc.r_o_m) require_finite("r_o_m", *rc.r_o_m);
  if (rc.r_t_m) require_finite("r_t_m", *rc.r_t_m);
  if (rc.l_m) {
    require_finite("l_m", *rc.l_m);
    if (*rc.l_m <= 0.0) fail("l_m", "must be > 0");
  }
  if (rc.n_trials < 1) fail("n_trials", "must be >= 1");
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  RunConfig rc;
  rc.d_m.reset();  // presence-tracked below; default restored if absent
  bool has_d = false, has_gamma = false;

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key == "lambda_b_per_km2")
      rc.lambda_b_per_km2 = get_number(j, key);
    else if (key == "lambda_r_per_km2")
      rc.lambda_r_per_km2 = get_number(j, key);
    else if (key == "p_t_dbm")
      rc.p_t_dbm = get_number(j, key);
    else if (key == "f_c_ghz")
      rc.f_c_ghz = get_number(j, key);
    else if (key == "alpha")
      rc.alpha = get_number(j, key);
    else if (key == "d_m") {
      rc.d_m = get_number(j, key);
      has_d = true;
    } else if (key == "gamma_irs_db") {
      rc.gamma_irs_db = get_number(j, key);
      has_gamma = true;
    } else if (key == "n_elements") {
      const long long n = get_integer(j, key);
      if (n > std::numeric_limits<int>::max()) fail(key, "too large");
      rc.n_elements = static_cast<int>(n);
    } else if (key == "v_mps")
      rc.v_mps = get_number(j, key);
    else if (key == "t_d_ms")
      rc.t_d_ms = get_number(j, key);
    else if (key == "gamma_ho_db")
      rc.gamma_ho_db = get_number(j, key);
    else if (key == "t_t_ms")
      rc.t_t_ms = get_number(j, key);
    else if (key == "t_p_s")
      rc.t_p_s = get_number(j, key);
    else if (key == "q_out_db")
      rc.q_out_db = get_number(j, key);
    else if (key == "r_o_m")
      rc.r_o_m = get_number(j, key);
    else if (key == "r_t_m")
      rc.r_t_m = get_number(j, key);
    else if (key == "l_m")
      rc.l_m = get_number(j, key);
    else if (key == "seed")
      rc.seed = get_u64(j, key);
    else if (key == "n_trials")
      rc.n_trials = get_integer(j, key);
    else
      fail(key, "unknown key");
  }

  if (has_d && has_gamma) fail("d_m", "set either d_m or gamma_irs_db, not both");
  if (!has_d && !has_gamma) rc.d_m = 50.0;

  validate(rc);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string to_json(const RunConfig& rc) {
  json j;
  j["lambda_b_per_km2"] = rc.lambda_b_per_km2;
  j["lambda_r_per_km2"] = rc.lambda_r_per_km2;
  j["p_t_dbm"] = rc.p_t_dbm;
  j["f_c_ghz"] = rc.f_c_ghz;
  j["alpha"] = rc.alpha;
  if (rc.d_m) j["d_m"] = *rc.d_m;
  if (rc.gamma_irs_db) j["gamma_irs_db"] = *rc.gamma_irs_db;
  j["n_elements"] = rc.n_elements;
  j["v_mps"] = rc.v_mps;
  j["t_d_ms"] = rc.t_d_ms;
  j["gamma_ho_db"] = rc.gamma_ho_db;
  j["t_t_ms"] = rc.t_t_ms;
  j["t_p_s"] = rc.t_p_s;
  j["q_out_db"] = rc.q_out_db;
  if (rc.r_o_m) j["r_o_m"] = *rc.r_o_m;
  if (rc.r_t_m) j["r_t_m"] = *rc.r_t_m;
  if (rc.l_m) j["l_m"] = *rc.l_m;
  j["seed"] = rc.seed;
  j["n_trials"] = rc.n_trials;
  return j.dump(2) + "\n";
}

EngineConfig to_engine_config(const RunConfig& rc) {
  validate(rc);
  try {
    ScenarioConfig sc;
    sc.lambda_b = units::per_km2_to_per_m2(rc.lambda_b_per_km2);
    sc.v = rc.v_mps;
    sc.t_d = units::ms_to_s(rc.t_d_ms);
    if (rc.r_o_m) sc.r_o = *rc.r_o_m;
    if (rc.r_t_m) sc.r_t = *rc.r_t_m;
    if (rc.l_m) sc.span = *rc.l_m;

    const double p_t = units::dbm_to_watt(rc.p_t_dbm);
    const double f_c = units::ghz_to_hz(rc.f_c_ghz);
    double d_serv;
    if (rc.d_m) {
      d_serv = *rc.d_m;
    } else {
      // Invert the serving threshold through a radius-free probe channel;
      // only beta and the array gain enter the inversion.
      const ChannelParams probe =
          make_channel(p_t, f_c, rc.alpha, rc.n_elements, 1.0);
      d_serv = serving_distance_from_threshold(
          units::db_to_linear(*rc.gamma_irs_db), probe);
    }

    EngineConfig cfg;
    cfg.geometry = make_geometry(sc);
    cfg.channel = make_channel(p_t, f_c, rc.alpha, rc.n_elements, d_serv);
    cfg.lambda_r = units::per_km2_to_per_m2(rc.lambda_r_per_km2);
    cfg.gamma_ho = units::db_to_linear(rc.gamma_ho_db);
    cfg.q_out = units::db_to_linear(rc.q_out_db);
    cfg.t_trigger = units::ms_to_s(rc.t_t_ms);
    cfg.t_pp = rc.t_p_s;
    return cfg;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config rejected: ") + e.what());
  }
}

}  // namespace irsho

#include "ist/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ist {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment", "n",       "half_width", "potential",  "amplitude", "width",
    "center",     "t",       "times",      "dt",         "epsilons",  "tol_unitarity",
    "bc_tol",     "cgo_tol", "max_iter",   "k_block",    "sweep_order", "substeps",
    "workers",    "z_pad",   "inverse_pad"};

std::string num(double v) { return CsvWriter::format(v); }

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("experiment", experiment);
  out.emplace_back("n", std::to_string(n));
  out.emplace_back("half_width", num(half_width));
  out.emplace_back("potential", potential);
  out.emplace_back("amplitude", num(amplitude));
  out.emplace_back("width", num(width));
  out.emplace_back("center", num(center));
  out.emplace_back("t", num(t));
  std::string ts;
  for (double v : times) ts += (ts.empty() ? "" : ";") + num(v);
  out.emplace_back("times", ts);
  out.emplace_back("dt", num(dt));
  std::string es;
  for (double v : epsilons) es += (es.empty() ? "" : ";") + num(v);
  out.emplace_back("epsilons", es);
  out.emplace_back("tol_unitarity", num(tol_unitarity));
  out.emplace_back("bc_tol", num(bc_tol));
  out.emplace_back("cgo_tol", num(cgo_tol));
  out.emplace_back("max_iter", std::to_string(max_iter));
  out.emplace_back("k_block", std::to_string(k_block));
  out.emplace_back("z_pad", std::to_string(z_pad));
  out.emplace_back("inverse_pad", std::to_string(inverse_pad));
  out.emplace_back("sweep_order", std::to_string(sweep_order));
  out.emplace_back("substeps", std::to_string(substeps));
  out.emplace_back("workers", std::to_string(workers));
  return out;
}

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKnownKeys.count(it.key())) throw ConfigError("config: unknown key: " + it.key());

  RunConfig cfg;
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key)) {
      try {
        dst = j.at(key).get<std::decay_t<decltype(dst)>>();
      } catch (const std::exception&) {
        throw ConfigError(std::string("config: bad value for key: ") + key);
      }
    }
  };
  get("experiment", cfg.experiment);
  get("n", cfg.n);
  get("half_width", cfg.half_width);
  get("potential", cfg.potential);
  get("amplitude", cfg.amplitude);
  get("width", cfg.width);
  get("center", cfg.center);
  get("t", cfg.t);
  get("times", cfg.times);
  get("dt", cfg.dt);
  get("epsilons", cfg.epsilons);
  get("tol_unitarity", cfg.tol_unitarity);
  get("bc_tol", cfg.bc_tol);
  get("cgo_tol", cfg.cgo_tol);
  get("max_iter", cfg.max_iter);
  get("k_block", cfg.k_block);
  get("z_pad", cfg.z_pad);
  get("inverse_pad", cfg.inverse_pad);
  get("sweep_order", cfg.sweep_order);
  get("substeps", cfg.substeps);
  get("workers", cfg.workers);
  if (cfg.experiment.empty()) throw ConfigError("config: missing experiment id");
  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_json(ss.str());
}

void validate(const RunConfig& cfg) {
  if (cfg.n != 0 && (cfg.n < 8 || !is_pow2(cfg.n)))
    throw ConfigError("config: n must be a power of two >= 8");
  if (cfg.half_width < 0.0) throw ConfigError("config: half_width must be positive");
  if (cfg.amplitude < 0.0) throw ConfigError("config: amplitude must be nonnegative");
  if (!(cfg.width > 0.0)) throw ConfigError("config: width must be positive");
  if (cfg.dt < 0.0) throw ConfigError("config: dt must be positive");
  if (cfg.t != -1.0 && cfg.t < 0.0) throw ConfigError("config: t must be nonnegative");
  for (double v : cfg.times)
    if (!(v > 0.0)) throw ConfigError("config: times must be positive");
  for (double v : cfg.epsilons)
    if (!(v > 0.0)) throw ConfigError("config: epsilons must be positive");
  if (!(cfg.tol_unitarity > 0.0) || !(cfg.bc_tol > 0.0) || !(cfg.cgo_tol > 0.0))
    throw ConfigError("config: tolerances must be positive");
  if (cfg.max_iter <= 0) throw ConfigError("config: max_iter must be positive");
  if (cfg.k_block < 0) throw ConfigError("config: k_block must be nonnegative");
  if (cfg.z_pad < 1 || cfg.inverse_pad < 1)
    throw ConfigError("config: pad factors must be >= 1");
  if (cfg.sweep_order != 2 && cfg.sweep_order != 4)
    throw ConfigError("config: sweep_order must be 2 or 4");
  if (cfg.substeps < 1) throw ConfigError("config: substeps must be >= 1");
  if (cfg.workers < 0) throw ConfigError("config: workers must be nonnegative");
}

}  // namespace ist

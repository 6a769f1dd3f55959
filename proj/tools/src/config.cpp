#include "reslab_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "reslab/errors.hpp"

namespace reslab::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& doc, ValidatedConfig& out) : doc_(doc), out_(out) {}

  void number(const char* key, double& dst) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_number()) return fail(key, "expected a number");
    dst = v.get<double>();
    if (!std::isfinite(dst)) fail(key, "must be finite");
  }
  void integer(const char* key, int& dst) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) return fail(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) return fail(key, "out of range");
    dst = static_cast<int>(x);
  }
  void boolean(const char* key, bool& dst) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_boolean()) return fail(key, "expected true or false");
    dst = v.get<bool>();
  }
  void seed(const char* key, std::uint64_t& dst) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) return fail(key, "expected a non-negative integer");
    dst = v.get<std::uint64_t>();
  }
  void gate(const char* key, Gate& dst) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_string()) return fail(key, "expected \"sqrt\" or \"printed\"");
    try {
      dst = parse_gate(v.get<std::string>());
    } catch (const InvalidArgument&) {
      fail(key, "unknown gate \"" + v.get<std::string>() + "\" (expected \"sqrt\" or \"printed\")");
    }
  }
  void modes(const char* key, std::vector<int>& dst) {
    if (!has(key)) return;
    const auto& v = doc_.at(key);
    if (!v.is_array()) return fail(key, "expected an array of mode indices");
    dst.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        fail(std::string(key) + "/" + std::to_string(i), "expected an integer");
        continue;
      }
      dst.push_back(v[i].get<int>());
    }
  }

  void fail(const std::string& key, const std::string& msg) { out_.errors.push_back({"/" + key, msg}); }

 private:
  bool has(const char* key) const { return doc_.contains(key) && !doc_.at(key).is_null(); }

  const json& doc_;
  ValidatedConfig& out_;
};

const char* const kKeys[] = {
    "eps",          "P",           "n_x1",         "length_x1", "dt",
    "t_end",        "M0",          "M",            "N",         "s0",
    "gate",         "seed",        "init_modes",   "packet_width", "packet_center",
    "packet_shift", "nonlinear",   "resonant_alpha_beta", "massless", "blowup_ceiling",
    "output_every", "checkpoint_every", "$schema", "description",
};

}  // namespace

ValidatedConfig config_validate(const json& doc) {
  ValidatedConfig out;
  if (!doc.is_object()) {
    out.errors.push_back({"", "config must be a JSON object"});
    return out;
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known = known || it.key() == k;
    if (!known) out.errors.push_back({"/" + it.key(), "unknown key"});
  }

  SimConfig& c = out.config;
  Reader r(doc, out);
  r.number("eps", c.eps);
  r.integer("P", c.P);
  r.integer("n_x1", c.n_x1);
  r.number("length_x1", c.length_x1);
  r.number("dt", c.dt);
  r.number("t_end", c.t_end);
  r.number("M0", c.M0);
  r.number("M", c.M);
  r.number("N", c.N);
  r.number("s0", c.s0);
  r.gate("gate", c.gate);
  r.seed("seed", c.seed);
  r.modes("init_modes", c.init_modes);
  r.number("packet_width", c.packet_width);
  r.number("packet_center", c.packet_center);
  r.number("packet_shift", c.packet_shift);
  r.boolean("nonlinear", c.nonlinear);
  r.boolean("resonant_alpha_beta", c.resonant_alpha_beta);
  r.boolean("massless", c.massless);
  r.number("blowup_ceiling", c.blowup_ceiling);
  r.integer("output_every", c.output_every);
  r.integer("checkpoint_every", c.checkpoint_every);
  // Keys that failed the type check keep their defaults, so the range checks
  // below still report everything else.

  if (!(c.eps >= 0.0)) r.fail("eps", "must be >= 0");
  if (c.P < 1) r.fail("P", "must be >= 1");
  if (c.n_x1 < 16 || (c.n_x1 & (c.n_x1 - 1)) != 0) r.fail("n_x1", "must be a power of two >= 16");
  if (!(c.length_x1 > 0.0)) r.fail("length_x1", "must be > 0");
  if (!(c.dt > 0.0)) r.fail("dt", "must be > 0");
  if (!(c.t_end >= c.dt)) r.fail("t_end", "must be >= dt");
  if (!(c.s0 > 0.0)) r.fail("s0", "must be > 0");
  if (c.s0 > 0.0 && !(c.t_end >= c.s0)) r.fail("t_end", "must be >= s0");
  if (!(c.M0 >= 0.0)) r.fail("M0", "must be >= 0");
  if (!(c.M >= 0.0)) r.fail("M", "must be >= 0");
  if (!(c.N >= 0.0)) r.fail("N", "must be >= 0");
  if (!(c.packet_width > 0.0)) r.fail("packet_width", "must be > 0");
  if (!(c.packet_center >= 0.0)) r.fail("packet_center", "must be >= 0");
  if (!(c.packet_shift >= 0.0)) r.fail("packet_shift", "must be >= 0");
  if (!(c.blowup_ceiling > 0.0)) r.fail("blowup_ceiling", "must be > 0");
  if (c.output_every < 1) r.fail("output_every", "must be >= 1");
  if (c.checkpoint_every < 0) r.fail("checkpoint_every", "must be >= 0");
  for (std::size_t i = 0; i < c.init_modes.size(); ++i)
    if (c.init_modes[i] < 0 || c.init_modes[i] >= c.P)
      r.fail("init_modes/" + std::to_string(i), "mode " + std::to_string(c.init_modes[i]) + " outside [0, P)");

  if (out.ok()) {
    try {
      c.check();
    } catch (const InvalidArgument& e) {
      out.errors.push_back({"", e.what()});
    }
  }

  // The long-time estimates are stated for M > 3 (local theory), M > 6
  // (global) and N >= 3/2; smaller values still run.
  auto g = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  if (!(c.M > 3.0)) out.warnings.push_back({"/M", "M = " + g(c.M) + " violates the M>3 hypothesis"});
  else if (!(c.M > 6.0)) out.warnings.push_back({"/M", "M = " + g(c.M) + " violates the M>6 hypothesis"});
  if (!(c.N >= 1.5)) out.warnings.push_back({"/N", "N = " + g(c.N) + " violates the N>=3/2 hypothesis"});
  return out;
}

json config_to_json(const SimConfig& c) {
  return json{{"eps", c.eps},
              {"P", c.P},
              {"n_x1", c.n_x1},
              {"length_x1", c.length_x1},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"M0", c.M0},
              {"M", c.M},
              {"N", c.N},
              {"s0", c.s0},
              {"gate", c.gate == Gate::AsPrinted ? "printed" : "sqrt"},
              {"seed", c.seed},
              {"init_modes", c.init_modes},
              {"packet_width", c.packet_width},
              {"packet_center", c.packet_center},
              {"packet_shift", c.packet_shift},
              {"nonlinear", c.nonlinear},
              {"resonant_alpha_beta", c.resonant_alpha_beta},
              {"massless", c.massless},
              {"blowup_ceiling", c.blowup_ceiling},
              {"output_every", c.output_every},
              {"checkpoint_every", c.checkpoint_every}};
}

ValidatedConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  auto v = config_validate(doc);
  if (!v.ok()) throw ConfigError("config file '" + path + "' is invalid", v.errors);
  return v;
}

}  // namespace reslab::cli

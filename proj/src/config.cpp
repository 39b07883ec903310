// Copyright 2026 The mfgp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mfgp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mfgp {
namespace {

std::string Located(const std::string& message, int line) {
  return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseDouble(std::string_view v, int line, const std::string& key) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const char* begin = v.data();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a finite number, got '" + std::string(v) + "'",
                      line);
  }
  return out;
}

template <typename Int>
Int ParseInt(std::string_view v, int line, const std::string& key) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + std::string(v) + "'", line);
  }
  return out;
}

bool ParseBool(std::string_view v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(v) + "'", line);
}

std::vector<double> ParseList(std::string_view v, int line, const std::string& key) {
  std::vector<double> out;
  if (Trim(v).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    const auto item = Trim(v.substr(start, comma == std::string_view::npos
                                               ? std::string_view::npos
                                               : comma - start));
    out.push_back(ParseDouble(item, line, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename E>
E ParseChoice(std::string_view v, const std::vector<std::pair<std::string_view, E>>& opts,
              int line, const std::string& key) {
  for (const auto& [name, value] : opts) {
    if (v == name) return value;
  }
  std::string allowed;
  for (const auto& o : opts) allowed += (allowed.empty() ? "" : " | ") + std::string(o.first);
  throw ConfigError(key + ": expected " + allowed + ", got '" + std::string(v) + "'", line);
}

std::string FormatList(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += FormatShortest(v[i]);
  }
  return out;
}

std::string_view BoolName(bool b) { return b ? "true" : "false"; }

struct Field {
  std::function<void(RunConfig&, std::string_view, int, const std::string&)> parse;
  std::function<std::string(const RunConfig&)> format;
};

#define MFGP_DOUBLE(name, member)                                                   \
  {name,                                                                            \
   {[](RunConfig& c, std::string_view v, int l, const std::string& k) {             \
      c.member = ParseDouble(v, l, k);                                              \
    },                                                                              \
    [](const RunConfig& c) { return FormatShortest(c.member); }}}
#define MFGP_INT(name, member)                                                      \
  {name,                                                                            \
   {[](RunConfig& c, std::string_view v, int l, const std::string& k) {             \
      c.member = ParseInt<decltype(c.member)>(v, l, k);                             \
    },                                                                              \
    [](const RunConfig& c) { return std::to_string(c.member); }}}
#define MFGP_BOOL(name, member)                                                     \
  {name,                                                                            \
   {[](RunConfig& c, std::string_view v, int l, const std::string& k) {             \
      c.member = ParseBool(v, l, k);                                                \
    },                                                                              \
    [](const RunConfig& c) { return std::string(BoolName(c.member)); }}}
#define MFGP_LIST(name, member)                                                     \
  {name,                                                                            \
   {[](RunConfig& c, std::string_view v, int l, const std::string& k) {             \
      c.member = ParseList(v, l, k);                                                \
    },                                                                              \
    [](const RunConfig& c) { return FormatList(c.member); }}}

// Keys in serialization order.
const std::vector<std::pair<std::string, Field>>& Fields() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"model",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          c.model = ParseChoice<ModelKind>(
              v, {{"evacuation", ModelKind::kEvacuation},
                  {"refinancing", ModelKind::kRefinancing}},
              l, k);
        },
        [](const RunConfig& c) { return std::string(ModelKindName(c.model)); }}},
      MFGP_DOUBLE("domain_lo", domain_lo),
      MFGP_DOUBLE("domain_hi", domain_hi),
      MFGP_DOUBLE("control_lo", control_lo),
      MFGP_DOUBLE("control_hi", control_hi),
      MFGP_INT("n_particles", n_particles),
      MFGP_INT("n_alpha", n_alpha),
      MFGP_DOUBLE("dt", dt),
      MFGP_DOUBLE("T", T),
      MFGP_DOUBLE("sigma", sigma),
      MFGP_INT("seed", seed),
      MFGP_INT("workers", workers),
      MFGP_DOUBLE("init_lo", init_lo),
      MFGP_DOUBLE("init_hi", init_hi),
      {"init_sampling",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          c.init_quantile = ParseChoice<bool>(v, {{"random", false}, {"quantile", true}}, l, k);
        },
        [](const RunConfig& c) { return std::string(c.init_quantile ? "quantile" : "random"); }}},
      MFGP_DOUBLE("eta", eta),
      MFGP_DOUBLE("beta", beta),
      MFGP_DOUBLE("epsilon", epsilon),
      MFGP_DOUBLE("softening", softening),
      MFGP_DOUBLE("drift_kernel_constant", drift_kernel_constant),
      MFGP_DOUBLE("M1", m1),
      {"rho",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          c.rho_linear = ParseChoice<bool>(v, {{"zero", false}, {"linear", true}}, l, k);
        },
        [](const RunConfig& c) { return std::string(c.rho_linear ? "linear" : "zero"); }}},
      MFGP_DOUBLE("rho_slope", rho_slope),
      {"ell",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          c.ell_linear = ParseChoice<bool>(v, {{"zero", false}, {"linear", true}}, l, k);
        },
        [](const RunConfig& c) { return std::string(c.ell_linear ? "linear" : "zero"); }}},
      MFGP_DOUBLE("ell_scale", ell_scale),
      MFGP_DOUBLE("M", bound_m),
      MFGP_DOUBLE("kde_bandwidth", kde_bandwidth),
      {"kernel_family",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          try {
            c.kernel_family = ParseKernelFamily(v);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(k + ": " + e.what(), l);
          }
        },
        [](const RunConfig& c) { return std::string(KernelFamilyName(c.kernel_family)); }}},
      MFGP_LIST("snapshot_times", snapshot_times),
      MFGP_LIST("value_trace_starts", value_trace_starts),
      MFGP_BOOL("phase1_enabled", phase1_enabled),
      MFGP_INT("phase1_n_particles", phase1_n_particles),
      MFGP_DOUBLE("phase1_keep_fraction", phase1_keep_fraction),
      MFGP_INT("max_sweeps", max_sweeps),
      MFGP_DOUBLE("convergence_threshold", convergence_threshold),
      {"sweep_mode",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          c.sweep_mode = ParseChoice<SweepMode>(
              v, {{"all_particles_per_step", SweepMode::kAllParticlesPerStep},
                  {"one_particle_per_step", SweepMode::kOneParticlePerStep}},
              l, k);
        },
        [](const RunConfig& c) {
          return std::string(c.sweep_mode == SweepMode::kAllParticlesPerStep
                                 ? "all_particles_per_step"
                                 : "one_particle_per_step");
        }}},
      {"cost_evaluation",
       {[](RunConfig& c, std::string_view v, int l, const std::string& k) {
          c.cost_evaluation = ParseChoice<CostEvaluation>(
              v, {{"post_step", CostEvaluation::kPostStep},
                  {"pre_step", CostEvaluation::kPreStep}},
              l, k);
        },
        [](const RunConfig& c) {
          return std::string(c.cost_evaluation == CostEvaluation::kPostStep ? "post_step"
                                                                            : "pre_step");
        }}},
      MFGP_BOOL("exclude_self", exclude_self),
      MFGP_DOUBLE("metric_a", metric_a),
      MFGP_INT("metric_terms", metric_terms),
      MFGP_BOOL("emit_plots", emit_plots),
  };
  return fields;
}

#undef MFGP_DOUBLE
#undef MFGP_INT
#undef MFGP_BOOL
#undef MFGP_LIST

}  // namespace

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(Located(message, line)), line_(line) {}

std::string FormatShortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view ModelKindName(ModelKind kind) {
  return kind == ModelKind::kEvacuation ? "evacuation" : "refinancing";
}

int RunConfig::NSteps() const { return static_cast<int>(std::llround(T / dt)); }

double RunConfig::BoundM() const {
  if (bound_m > 0.0) return bound_m;
  return std::max(std::abs(control_lo), std::abs(control_hi));
}

void RunConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  require(dt > 0.0, "dt > 0");
  require(T > 0.0, "T > 0");
  const double steps = T / dt;
  require(std::abs(steps - std::round(steps)) <= 1e-9, "T / dt integral within 1e-9");
  require(std::round(steps) >= 1.0 && std::round(steps) <= 1e8, "1 <= T / dt <= 1e8");
  require(n_particles >= 1 && n_particles <= 100000000, "n_particles >= 1");
  require(n_alpha >= 2, "n_alpha >= 2");
  require(domain_lo < domain_hi, "domain_lo < domain_hi");
  require(control_lo < control_hi, "control_lo < control_hi");
  require(sigma >= 0.0, "sigma >= 0");
  require(workers >= 1, "workers >= 1");
  require(domain_lo <= init_lo && init_lo < init_hi && init_hi <= domain_hi,
          "domain_lo <= init_lo < init_hi <= domain_hi");
  for (const double t : snapshot_times) {
    require(t >= 0.0 && t <= T, "snapshot_times within [0, T]");
  }
  for (const double x : value_trace_starts) {
    require(x > domain_lo && x < domain_hi, "value_trace_starts inside the domain");
  }
  require(kde_bandwidth > 0.0, "kde_bandwidth > 0");
  require(phase1_n_particles >= 1, "phase1_n_particles >= 1");
  require(phase1_keep_fraction >= 0.0 && phase1_keep_fraction <= 1.0,
          "phase1_keep_fraction within [0, 1]");
  require(max_sweeps >= 0, "max_sweeps >= 0");
  require(convergence_threshold >= 0.0, "convergence_threshold >= 0");
  require(metric_a > 1.0, "metric_a > 1");
  require(metric_terms >= 1, "metric_terms >= 1");
  if (model == ModelKind::kEvacuation) {
    require(eta >= 0.0 && beta >= 0.0 && epsilon >= 0.0, "eta, beta, epsilon >= 0");
    require(softening > 0.0, "softening > 0");
  } else {
    require(epsilon > 0.0, "epsilon > 0");
    require(m1 >= 0.0, "M1 >= 0");
    require(bound_m >= 0.0, "M >= 0");
  }
}

RunConfig ParseConfigText(std::string_view text) {
  const auto& fields = Fields();
  RunConfig config;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value'", line_no);
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    const auto it = std::find_if(fields.begin(), fields.end(),
                                 [&](const auto& f) { return f.first == key; });
    if (it == fields.end()) throw ConfigError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);
    it->second.parse(config, value, line_no, key);
  }
  config.Validate();
  return config;
}

RunConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfigText(buf.str());
}

std::string SerializeConfig(const RunConfig& config) {
  std::string out;
  for (const auto& [key, field] : Fields()) {
    out += key + " = " + field.format(config) + "\n";
  }
  return out;
}

ModelSpec BuildModel(const RunConfig& config) {
  const Interval domain{config.domain_lo, config.domain_hi};
  const Interval controls{config.control_lo, config.control_hi};
  if (config.model == ModelKind::kEvacuation) {
    EvacuationParams p;
    p.eta = config.eta;
    p.beta = config.beta;
    p.epsilon = config.epsilon;
    p.softening = config.softening;
    if (config.drift_kernel_constant != 0.0) {
      const double c = config.drift_kernel_constant;
      p.drift_kernel = [c](double) { return c; };
    }
    return MakeEvacuationModel(p, domain, controls, config.sigma);
  }
  RefinancingParams p;
  p.m1 = config.m1;
  p.epsilon = config.epsilon;
  p.ell_scale = config.ell_linear ? config.ell_scale : 0.0;
  if (config.rho_linear) {
    const double slope = config.rho_slope;
    p.rho = [slope](double theta) { return slope * theta; };
  }
  return MakeRefinancingModel(p, domain, controls, config.sigma);
}

ControlGrid BuildGrid(const RunConfig& config) {
  return ControlGrid::Uniform(config.control_lo, config.control_hi, config.n_alpha);
}

EngineConfig BuildEngineConfig(const RunConfig& config) {
  EngineConfig e;
  e.dt = config.dt;
  e.n_steps = config.NSteps();
  e.seed = config.seed;
  e.sweep_mode = config.sweep_mode;
  e.cost_evaluation = config.cost_evaluation;
  e.exclude_self = config.exclude_self;
  e.max_sweeps = config.max_sweeps;
  e.convergence_threshold = config.convergence_threshold;
  e.metric.a = config.metric_a;
  e.metric.max_terms = config.metric_terms;
  e.metric.state_box = {config.domain_lo, config.domain_hi};
  e.metric.control_box = {config.control_lo, config.control_hi};
  e.workers = config.workers;
  return e;
}

DensityFn BuildInitialDensity(const RunConfig& config) {
  const double lo = config.init_lo;
  const double hi = config.init_hi;
  const double height = 1.0 / (hi - lo);
  return [lo, hi, height](double x) { return x > lo && x < hi ? height : 0.0; };
}

ControlParams BuildControlParams(const RunConfig& config) {
  ControlParams p;
  p.m1 = config.m1;
  p.m2 = 0.0;
  p.epsilon = config.epsilon;
  p.bound_m = config.BoundM();
  return p;
}

}  // namespace mfgp

#include "dspc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dspc/errors.hpp"
#include "json.hpp"

namespace dspc::cli {

using nlohmann::json;

namespace {

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

double require_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

unsigned require_count(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return value.get<unsigned>();
}

Interval parse_interval(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) throw ConfigError(path, "expected [lo, hi]");
  const double lo = require_number(value[0], path + "[0]");
  const double hi = require_number(value[1], path + "[1]");
  if (lo > hi) throw ConfigError(path, "lower bound exceeds upper bound");
  return {lo, hi};
}

DSStructure parse_source(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(path, "expected a non-empty list of focal elements");
  }
  std::vector<FocalElement> focal;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string fp = index_path(path, i);
    const Interval interval = parse_interval(require(value[i], "interval", fp), fp + ".interval");
    const json& m = require(value[i], "mass", fp);
    double mass = 0.0;
    if (m.is_string()) {
      auto parsed = parse_mass(m.get<std::string>());
      if (!parsed) throw ConfigError(fp + ".mass", "malformed mass '" + m.get<std::string>() + "'");
      mass = *parsed;
    } else {
      mass = require_number(m, fp + ".mass");
    }
    if (!(mass > 0.0)) throw ConfigError(fp + ".mass", "mass must be positive");
    focal.push_back({interval, mass});
  }
  try {
    return DSStructure(std::move(focal));
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

VariableSpec parse_variable(const json& value, const std::string& path) {
  VariableSpec spec;
  const json& name = require(value, "name", path);
  if (!name.is_string() || name.get<std::string>().empty()) {
    throw ConfigError(path + ".name", "expected a non-empty string");
  }
  spec.name = name.get<std::string>();

  const json& sources = require(value, "sources", path);
  if (!sources.is_array() || sources.empty()) {
    throw ConfigError(path + ".sources", "expected a non-empty list of sources");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    spec.sources.push_back(parse_source(sources[i], index_path(path + ".sources", i)));
  }

  if (auto it = value.find("aggregation"); it != value.end()) {
    const std::string ap = path + ".aggregation";
    const json& rule = require(*it, "rule", ap);
    if (rule == "mixing") {
      spec.rule = Aggregation::mixing;
      if (auto w = it->find("weights"); w != it->end()) {
        if (!w->is_array() || w->size() != spec.sources.size()) {
          throw ConfigError(ap + ".weights", "expected one weight per source");
        }
        for (std::size_t i = 0; i < w->size(); ++i) {
          const double wi = require_number((*w)[i], index_path(ap + ".weights", i));
          if (wi < 0.0) throw ConfigError(index_path(ap + ".weights", i), "weight is negative");
          spec.weights.push_back(wi);
        }
        if (std::all_of(spec.weights.begin(), spec.weights.end(), [](double x) { return x == 0.0; })) {
          throw ConfigError(ap + ".weights", "weights are all zero");
        }
      }
    } else if (rule == "dempster") {
      spec.rule = Aggregation::dempster;
    } else {
      throw ConfigError(ap + ".rule", "expected \"mixing\" or \"dempster\"");
    }
  }
  return spec;
}

std::vector<Method> parse_methods(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) throw ConfigError(path, "expected a list of methods");
  std::vector<Method> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string mp = index_path(path, i);
    if (!value[i].is_string()) throw ConfigError(mp, "expected a method name");
    auto m = parse_method(value[i].get<std::string>());
    if (!m) throw ConfigError(mp, "unknown method '" + value[i].get<std::string>() + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  return out;
}

void parse_queries(const json& value, ProblemConfig& config) {
  if (!value.is_array()) throw ConfigError("queries", "expected a list");
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string qp = index_path("queries", i);
    const json& q = value[i];
    if (!q.is_object()) throw ConfigError(qp, "expected an object");
    if (auto it = q.find("exceedance"); it != q.end()) {
      config.exceedance.push_back(require_number(*it, qp + ".exceedance"));
    } else if (auto c = q.find("curve"); c != q.end()) {
      const std::string cp = qp + ".curve";
      CurveQuery curve{require_number(require(*c, "from", cp), cp + ".from"),
                       require_number(require(*c, "to", cp), cp + ".to"),
                       require_number(require(*c, "step", cp), cp + ".step")};
      if (curve.to < curve.from) throw ConfigError(cp, "'to' is below 'from'");
      if (!(curve.step > 0.0)) throw ConfigError(cp + ".step", "step must be positive");
      config.curves.push_back(curve);
    } else {
      throw ConfigError(qp, "expected an 'exceedance' or 'curve' query");
    }
  }
}

void check_function(const ProblemConfig& config) {
  std::vector<std::string> names;
  for (const auto& v : config.variables) names.push_back(v.name);
  try {
    (void)parse(config.function, names);
  } catch (const UnknownIdentifier& e) {
    throw ConfigError("function", e.what());
  } catch (const SyntaxError& e) {
    throw ConfigError("function", e.what());
  }
}

}  // namespace

std::optional<double> parse_mass(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  auto number = [](std::string_view s) -> std::optional<double> {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
      return std::nullopt;
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return number(trim(text));
  auto num = number(trim(text.substr(0, slash)));
  auto den = number(trim(text.substr(slash + 1)));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

DSStructure VariableSpec::aggregate() const {
  if (sources.size() == 1) return sources.front();
  if (rule == Aggregation::dempster) {
    DSStructure acc = sources.front();
    for (std::size_t i = 1; i < sources.size(); ++i) acc = dempster_combine(acc, sources[i]);
    return acc;
  }
  std::vector<double> w = weights.empty() ? std::vector<double>(sources.size(), 1.0) : weights;
  return mix(sources, w);
}

ProblemConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  ProblemConfig config;
  const json& fn = require(root, "function", "");
  if (!fn.is_string() || fn.get<std::string>().empty()) {
    throw ConfigError("function", "expected a non-empty expression string");
  }
  config.function = fn.get<std::string>();

  const json& vars = require(root, "variables", "");
  if (!vars.is_array() || vars.empty()) throw ConfigError("variables", "expected a non-empty list");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    VariableSpec spec = parse_variable(vars[i], index_path("variables", i));
    for (const auto& other : config.variables) {
      if (other.name == spec.name) {
        throw ConfigError(index_path("variables", i) + ".name", "duplicate variable '" + spec.name + "'");
      }
    }
    config.variables.push_back(std::move(spec));
  }
  check_function(config);

  if (auto it = root.find("propagation"); it != root.end()) {
    const json& p = *it;
    if (!p.is_object()) throw ConfigError("propagation", "expected an object");
    PropagationConfig& pc = config.propagation;
    if (auto v = p.find("order"); v != p.end()) pc.order = require_count(*v, "propagation.order");
    if (auto v = p.find("quad_points"); v != p.end()) pc.quad_points = require_count(*v, "propagation.quad_points");
    if (auto v = p.find("subdivisions"); v != p.end()) pc.subdivisions = require_count(*v, "propagation.subdivisions");
    if (auto v = p.find("oracle_grid"); v != p.end()) pc.oracle_grid = require_count(*v, "propagation.oracle_grid");
    if (auto v = p.find("oracle_refine"); v != p.end()) pc.oracle_refine = require_count(*v, "propagation.oracle_refine");
    if (auto v = p.find("methods"); v != p.end()) config.methods = parse_methods(*v, "propagation.methods");
    try {
      pc.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError("propagation", e.what());
    }
  }
  if (auto it = root.find("queries"); it != root.end()) parse_queries(*it, config);
  return config;
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_overrides(ProblemConfig& config, const RunOptions& options) {
  if (options.method) {
    if (*options.method == "all") {
      config.methods = {Method::chaos_bernstein, Method::interval_baseline, Method::grid_oracle};
    } else if (auto m = parse_method(*options.method)) {
      config.methods = {*m};
    } else {
      throw ConfigError("--method", "unknown method '" + *options.method + "'");
    }
  }
  if (options.order) config.propagation.order = *options.order;
  if (options.quad_points) config.propagation.quad_points = *options.quad_points;
  if (options.subdivisions) config.propagation.subdivisions = *options.subdivisions;
  try {
    config.propagation.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("propagation", e.what());
  }
}

std::vector<double> curve_abscissae(const CurveQuery& query, const DSStructure& ds) {
  std::vector<double> xs;
  const auto steps = static_cast<std::size_t>(std::floor((query.to - query.from) / query.step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) xs.push_back(query.from + static_cast<double>(i) * query.step);
  xs.push_back(query.to);
  for (const auto& fe : ds.focal()) {
    for (double e : {fe.interval.lo(), fe.interval.hi()}) {
      if (e >= query.from && e <= query.to) xs.push_back(e);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // Drop grid points that overshoot `to` by rounding.
  while (!xs.empty() && xs.back() > query.to) xs.pop_back();
  return xs;
}

namespace {

std::string fmt6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) { return std::strtod(fmt6(v).c_str(), nullptr); }

}  // namespace

RunOutput render(const ProblemConfig& config) {
  std::vector<std::string> names;
  NamedStructures inputs;
  for (const auto& v : config.variables) {
    names.push_back(v.name);
    inputs.emplace_back(v.name, v.aggregate());
  }
  const Expr f = parse(config.function, names);

  std::ostringstream table;
  table << "method,box_id";
  for (const auto& n : names) table << ',' << n << "_lo," << n << "_hi";
  table << ",y_lo,y_hi,mass\n";

  std::ostringstream curves;
  curves << "method,x,cbf,cpf,ccbf,ccpf\n";

  json summary;
  summary["function"] = config.function;
  summary["propagation"] = {{"order", config.propagation.order},
                            {"quad_points", config.propagation.quad_points},
                            {"subdivisions", config.propagation.subdivisions},
                            {"oracle_grid", config.propagation.oracle_grid},
                            {"oracle_refine", config.propagation.oracle_refine}};
  json jinputs = json::array();
  for (const auto& [name, ds] : inputs) {
    json focal = json::array();
    for (const auto& fe : ds.focal()) {
      focal.push_back({{"interval", {round6(fe.interval.lo()), round6(fe.interval.hi())}},
                       {"mass", round6(fe.mass)}});
    }
    jinputs.push_back({{"name", name}, {"focal", focal}});
  }
  summary["inputs"] = jinputs;
  json jresults = json::array();

  for (Method method : config.methods) {
    PropagationConfig pc = config.propagation;
    pc.method = method;
    const PropagationResult result = map_ds(f, inputs, pc);
    const std::string tag(to_string(method));

    for (const auto& rec : result.boxes) {
      table << tag << ',' << rec.box_id;
      for (const auto& iv : rec.inputs) table << ',' << fmt6(iv.lo()) << ',' << fmt6(iv.hi());
      table << ',' << fmt6(rec.output.lo()) << ',' << fmt6(rec.output.hi()) << ','
            << fmt6(rec.mass) << '\n';
    }
    for (const auto& query : config.curves) {
      for (double x : curve_abscissae(query, result.output)) {
        const auto c = cumulative(result.output, x);
        const auto cc = complementary_cumulative(result.output, x);
        curves << tag << ',' << fmt6(x) << ',' << fmt6(c.cbf) << ',' << fmt6(c.cpf) << ','
               << fmt6(cc.ccbf) << ',' << fmt6(cc.ccpf) << '\n';
      }
    }
    json exceed = json::array();
    for (double t : config.exceedance) {
      const auto b = exceedance_bounds(result.output, t);
      exceed.push_back({{"threshold", round6(t)}, {"lower", round6(b.lower)}, {"upper", round6(b.upper)}});
    }
    const Interval hull = result.output.hull();
    jresults.push_back({{"method", tag},
                        {"focal_elements", result.output.size()},
                        {"support", {round6(hull.lo()), round6(hull.hi())}},
                        {"exceedance", exceed}});
  }
  summary["results"] = jresults;
  return {table.str(), curves.str(), summary.dump(2) + "\n"};
}

namespace {

enum class LogLevel { quiet, info, debug };

LogLevel log_level() {
  const char* env = std::getenv("DSPC_LOG_LEVEL");
  if (!env) return LogLevel::info;
  const std::string_view v(env);
  if (v == "quiet" || v == "error") return LogLevel::quiet;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::info;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw ConfigError("--out", "cannot write '" + path.string() + "'");
}

}  // namespace

int run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& diag) {
  const LogLevel level = log_level();
  ProblemConfig config;
  try {
    config = load_config(config_path);
    apply_overrides(config, options);
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return 1;
  }
  if (level == LogLevel::debug) {
    diag << "function: " << config.function << ", " << config.variables.size() << " variables, "
         << config.methods.size() << " method(s)\n";
  }

  RunOutput output;
  try {
    output = render(config);
  } catch (const PropagationError& e) {
    diag << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const TotalConflict& e) {
    diag << "config error: aggregation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    diag << "numerical error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw ConfigError("--out", "cannot create '" + options.out_dir.string() + "'");
    write_file(options.out_dir / "ds_table.csv", output.ds_table);
    write_file(options.out_dir / "curves.csv", output.curves);
    write_file(options.out_dir / "summary.json", output.summary);
  } catch (const ConfigError& e) {
    diag << "output error: " << e.what() << '\n';
    return 1;
  }
  if (level != LogLevel::quiet) diag << "wrote results to " << options.out_dir.string() << '\n';
  return 0;
}

}  // namespace dspc::cli

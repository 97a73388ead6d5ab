#include "ndsp_cli/app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ndsp::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); }

// labels become file names
std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return out;
}

struct CsvWriter {
  std::ostringstream os;
  CsvWriter() { os << kCsvHeader << '\n'; }
  void row(const std::string& sys, const std::string& pot, const std::string& kind, int n, double eps,
           const std::string& s, double value, bool certified) {
    os << sys << ',' << pot << ',' << kind << ',' << n << ',' << fmt(eps) << ',' << s << ',' << fmt(value) << ','
       << (certified ? 1 : 0) << '\n';
  }
};

// the window cell a capacity proxy was read from
json capacity_entry(const PressureEstimate& est, const Schedule& sch, const char* kind) {
  json e{{"value", num(est.value)}, {"kind", kind}, {"epsilon", num(sch.smallest_eps())}};
  const auto tail = sch.tail();
  for (const auto& c : est.cells)
    if (c.eps == sch.smallest_eps() && std::find(tail.begin(), tail.end(), c.n) != tail.end() &&
        c.log_value == est.value) {
      e["n"] = c.n;
      break;
    }
  e["epsilon_monotone_ok"] = est.epsilon_monotone_ok;
  e["growth_rate"] = num(est.growth_rate);
  return e;
}

json measure_entry(const PressureEstimate& est, const Schedule& sch, const char* kind) {
  json e{{"value", num(est.value)}, {"kind", kind}, {"epsilon", num(sch.smallest_eps())}};
  if (!est.cells.empty()) e["n"] = est.cells.back().n;
  e["epsilon_monotone_ok"] = est.epsilon_monotone_ok;
  return e;
}

std::string plot_tsv(const std::vector<Cell>& cells, const Schedule& sch) {
  std::ostringstream os;
  os << 'n';
  for (double e : sch.eps_list) os << "\teps=" << fmt(e);
  os << '\n';
  for (int n : sch.n_list) {
    os << n;
    for (double e : sch.eps_list) {
      const Cell* hit = nullptr;
      for (const auto& c : cells)
        if (c.n == n && c.eps == e) hit = &c;
      os << '\t' << (hit ? fmt(hit->log_value) : "nan");
    }
    os << '\n';
  }
  return os.str();
}

json check_json(const TheoremCheck& c) {
  json w = json::array();
  for (const auto& x : c.witnesses)
    w.push_back({{"system", x.system},
                 {"potential", x.potential},
                 {"relation", x.relation},
                 {"n", x.n},
                 {"epsilon", num(x.eps)},
                 {"lhs", num(x.lhs)},
                 {"rhs", num(x.rhs)}});
  json d = json::array();
  for (const auto& x : c.diagnostics)
    d.push_back({{"system", x.system}, {"potential", x.potential}, {"name", x.name}, {"value", num(x.value)}});
  return {{"theorem_id", c.theorem_id},
          {"status", to_string(c.status)},
          {"slack", c.slack},
          {"assertions", c.assertions},
          {"violations", c.violations},
          {"systems", c.systems},
          {"potentials", c.potentials},
          {"witnesses", w},
          {"diagnostics", d},
          {"note", c.note}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

template <class F>
Outcome guarded(F body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return {kSchemaError, e.what()};
  } catch (const json::exception& e) {
    return {kSchemaError, e.what()};
  } catch (const ScheduleError& e) {
    return {kInfeasible, e.what()};
  } catch (const HorizonError& e) {
    return {kInfeasible, e.what()};
  } catch (const BudgetExceeded& e) {
    return {kInfeasible, std::string(e.what()) + " (use greedy mode or schedule.fallback)"};
  } catch (const std::exception& e) {
    return {kInternal, std::string("internal error: ") + e.what()};
  }
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

Outcome execute(const json& doc, const Overrides& overrides, RunOutputs* keep) {
  auto cfg = parse_config(doc);
  apply(cfg, overrides);
  auto out = compute(cfg);
  write_outputs(out, cfg.output_dir);
  Outcome o{out.checks_ok ? kOk : kCheckFailure,
            out.checks_ok ? "wrote " + cfg.output_dir : "asserting checks failed; see " + cfg.output_dir + "/checks.json"};
  if (keep) *keep = std::move(out);
  return o;
}

json literal(const std::string& v) {
  try {
    return json::parse(v);
  } catch (const json::parse_error&) {
    return json(v);  // bare words such as greedy
  }
}

void set_everywhere(json& doc, const char* key, const json& value) {
  doc["schedule"][key] = value;
  if (doc.contains("systems") && doc["systems"].is_array())
    for (auto& s : doc["systems"])
      if (s.is_object() && s.contains("schedule")) s["schedule"][key] = value;
}

void apply_sweep(json& doc, const std::string& parameter, const json& v) {
  if (!doc.is_object()) throw ConfigError("config must be an object");
  if (parameter == "epsilon") {
    set_everywhere(doc, "eps_list", json::array({v}));
  } else if (parameter == "n_max") {
    if (!v.is_number_integer() || v.get<int>() < 1) throw ConfigError("n_max takes a positive integer");
    json list = json::array();
    for (int n = 1; n <= v.get<int>(); ++n) list.push_back(n);
    set_everywhere(doc, "n_list", list);
  } else if (parameter == "tail_window") {
    set_everywhere(doc, "tail_window", v);
  } else if (parameter == "mode") {
    set_everywhere(doc, "mode", v);
  } else if (parameter == "seed") {
    doc["seed"] = v;
  } else if (parameter == "power") {
    if (doc.contains("systems") && doc["systems"].is_array())
      for (auto& s : doc["systems"]) s["power"] = v;
  } else if (!parameter.empty() && parameter.front() == '/') {
    try {
      doc[json::json_pointer(parameter)] = v;
    } catch (const json::exception& e) {
      throw ConfigError("bad parameter pointer '" + parameter + "': " + e.what());
    }
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
}

}  // namespace

RunOutputs compute(const RunConfig& cfg) {
  const auto h = build(cfg);
  RunOutputs out;
  CsvWriter csv;
  json summary = json::array();
  for (const auto& sys : h.systems) {
    const auto& sch = *sys.schedule;
    const PointSet Z = sys.Z.empty() ? all_points(sys.system.space(0).size()) : sys.Z;
    for (const auto& f : sys.potentials) {
      const auto rep = all_pressures(sys.system, f, Z, sch);
      const auto& fl = f.label();
      for (const auto& c : rep.capacity.span_upper.cells)
        csv.row(sys.label, fl, "span", c.n, c.eps, "", c.log_value, c.certified);
      for (const auto& c : rep.capacity.sep_upper.cells)
        csv.row(sys.label, fl, "sep", c.n, c.eps, "", c.log_value, c.certified);
      for (const auto& c : rep.bowen.cells) csv.row(sys.label, fl, "bowen", c.n, c.eps, fmt(c.log_value), c.value, c.certified);
      for (const auto& c : rep.packing.cells)
        csv.row(sys.label, fl, "packing", c.n, c.eps, fmt(c.log_value), c.value, c.certified);

      json entry{{"system", sys.label}, {"potential", fl}};
      entry["span_lower"] = capacity_entry(rep.capacity.span_lower, sch, "span");
      entry["span_upper"] = capacity_entry(rep.capacity.span_upper, sch, "span");
      entry["sep_lower"] = capacity_entry(rep.capacity.sep_lower, sch, "sep");
      entry["sep_upper"] = capacity_entry(rep.capacity.sep_upper, sch, "sep");
      entry["bowen"] = measure_entry(rep.bowen, sch, "bowen");
      entry["packing"] = measure_entry(rep.packing, sch, "packing");
      entry["packing"]["upper_bound_only"] = rep.packing.upper_bound_only;
      entry["packing"]["alternative"] = num(rep.packing.alternative);
      entry["certified"] = rep.capacity.span_upper.certified() && rep.capacity.sep_upper.certified() &&
                           rep.bowen.certified() && rep.packing.certified();
      summary.push_back(std::move(entry));

      const std::string stem = slug(sys.label) + "__" + slug(fl) + "__";
      out.plotdata[stem + "span.tsv"] = plot_tsv(rep.capacity.span_upper.cells, sch);
      out.plotdata[stem + "sep.tsv"] = plot_tsv(rep.capacity.sep_upper.cells, sch);
    }
  }
  out.estimates_csv = csv.os.str();
  out.summary_json = json{{"estimates", summary}}.dump(2) + "\n";

  json checks = json::array();
  if (!cfg.checks.empty())
    for (const auto& c : run_checks(cfg.checks, h)) {
      if (c.failed()) out.checks_ok = false;
      checks.push_back(check_json(c));
    }
  out.checks_json = json{{"checks", checks}, {"all_asserting_passed", out.checks_ok}}.dump(2) + "\n";
  return out;
}

void write_outputs(const RunOutputs& out, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root / "plotdata");
  write_text(root / "estimates.csv", out.estimates_csv);
  write_text(root / "summary.json", out.summary_json);
  write_text(root / "checks.json", out.checks_json);
  for (const auto& [name, text] : out.plotdata) write_text(root / "plotdata" / name, text);
}

Outcome run_document(const json& doc, const Overrides& overrides) {
  return guarded([&] { return execute(doc, overrides, nullptr); });
}

Outcome run(const std::string& config_path, const Overrides& overrides) {
  return guarded([&] { return execute(load(config_path), overrides, nullptr); });
}

Outcome sweep(const std::string& config_path, const std::string& parameter, const std::vector<std::string>& values,
              const Overrides& overrides) {
  return guarded([&]() -> Outcome {
    const json base = load(config_path);
    if (values.empty()) return {kOk, "no values; nothing to sweep"};
    auto cfg0 = parse_config(base);
    apply(cfg0, overrides);
    const fs::path root(cfg0.output_dir);
    std::ostringstream all;
    all << "parameter,parameter_value," << kCsvHeader << '\n';
    int worst = kOk;
    const std::string name = parameter.front() == '/' ? slug(parameter.substr(1)) : parameter;
    for (const auto& v : values) {
      json doc = base;
      apply_sweep(doc, parameter, literal(v));
      Overrides o = overrides;
      o.out_dir = (root / (name + "=" + slug(v))).string();
      RunOutputs kept;
      const auto r = execute(doc, o, &kept);
      worst = std::max(worst, r.exit_code);
      std::istringstream rows(kept.estimates_csv);
      std::string line;
      std::getline(rows, line);  // header
      while (std::getline(rows, line)) all << parameter << ',' << v << ',' << line << '\n';
    }
    fs::create_directories(root);
    write_text(root / "sweep.csv", all.str());
    return {worst, "wrote " + (root / "sweep.csv").string()};
  });
}

Outcome validate(const std::string& config_path, const Overrides& overrides) {
  return guarded([&]() -> Outcome {
    auto cfg = parse_config(load(config_path));
    apply(cfg, overrides);
    const auto h = build(cfg);
    return {kOk, "config ok: " + std::to_string(h.systems.size()) + " systems, " +
                     std::to_string(cfg.potentials.size()) + " potentials, " + std::to_string(cfg.checks.size()) +
                     " checks"};
  });
}

std::vector<std::pair<std::string, std::string>> list_checks() {
  return {
      {"homogeneous_collapse", "full shift spaces: packing = upper capacity; pooled splits cannot lower the sup"},
      {"inequality_chain", "P^B <= Q_lower <= Q_upper, P^B <= P_lower <= P_upper, P^B <= P^P <= P_upper"},
      {"invariance", "relabeling gives identical cells; d/(1+d) with mapped radii gives the same proxies"},
      {"potential_properties", "per cell: shift, order, |f|, bounds, continuity, finite head, scaling"},
      {"power_rule", "per cell P_n(T^m) <= P_nm(T) <= P_n(T^m, delta); proxy ratio m"},
      {"product_rules", "per cell product bounds for P_n and Q_n; proxy-level product chains"},
      {"subset_properties", "monotone in Z, finite unions, closure identity, union stability of P^B and P^P"},
  };
}

}  // namespace ndsp::cli

#include "ndsp_cli/config.hpp"

#include <algorithm>
#include <set>

#include "ndsp/model_zoo.hpp"

namespace ndsp::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) fail(where, "unknown field '" + k + "'");
}

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long long>();
}

std::size_t count(const json& v, const std::string& where, long long min = 0) {
  const auto x = integer(v, where);
  if (x < min) fail(where, "must be at least " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

bool flag(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected true or false");
  return v.get<bool>();
}

template <class T, class F>
std::vector<T> list(const json& v, const std::string& where, F each) {
  if (!v.is_array()) fail(where, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(each(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> numbers(const json& v, const std::string& where) {
  return list<double>(v, where, number);
}

std::vector<int> ints(const json& v, const std::string& where) {
  return list<int>(v, where, [](const json& x, const std::string& w) { return static_cast<int>(integer(x, w)); });
}

SystemSpec parse_system(const json& s, const std::string& where) {
  only_keys(s, where,
            {"label", "family", "parameters", "horizon", "potentials", "subset", "schedule", "power", "bounded_metric",
             "relabel_seed", "equicontinuous", "homogeneous"});
  SystemSpec spec;
  spec.label = text(need(s, "label", where), where + ".label");
  if (spec.label.empty()) fail(where + ".label", "must not be empty");
  spec.family = text(need(s, "family", where), where + ".family");
  static const std::set<std::string> families{"symbolic", "circle_expanding", "tent_sequence", "custom_table", "random"};
  if (!families.count(spec.family)) fail(where + ".family", "unknown family '" + spec.family + "'");
  spec.parameters = need(s, "parameters", where);
  if (!spec.parameters.is_object()) fail(where + ".parameters", "expected an object");
  if (s.contains("horizon")) spec.horizon = count(s["horizon"], where + ".horizon");
  if (s.contains("potentials"))
    spec.potentials = list<std::string>(s["potentials"], where + ".potentials", text);
  if (s.contains("subset"))
    for (auto i : list<long long>(s["subset"], where + ".subset", integer)) {
      if (i < 0) fail(where + ".subset", "indices must be nonnegative");
      spec.subset.push_back(static_cast<Index>(i));
    }
  if (s.contains("schedule")) spec.schedule = s["schedule"];
  if (s.contains("power")) spec.power = static_cast<int>(count(s["power"], where + ".power", 1));
  if (s.contains("bounded_metric")) spec.bounded_metric = flag(s["bounded_metric"], where + ".bounded_metric");
  if (s.contains("relabel_seed")) spec.relabel_seed = count(s["relabel_seed"], where + ".relabel_seed");
  if (s.contains("equicontinuous")) spec.equicontinuous = flag(s["equicontinuous"], where + ".equicontinuous");
  if (s.contains("homogeneous")) spec.homogeneous = flag(s["homogeneous"], where + ".homogeneous");
  return spec;
}

PotentialSpec parse_potential(const json& p, const std::string& where) {
  if (!p.is_object()) fail(where, "expected an object");
  PotentialSpec spec;
  spec.label = text(need(p, "label", where), where + ".label");
  spec.kind = text(need(p, "kind", where), where + ".kind");
  if (spec.kind == "zero")
    only_keys(p, where, {"label", "kind"});
  else if (spec.kind == "constant")
    only_keys(p, where, {"label", "kind", "value"}), number(need(p, "value", where), where + ".value");
  else if (spec.kind == "first_coordinate")
    only_keys(p, where, {"label", "kind", "scale"});
  else if (spec.kind == "cosine")
    only_keys(p, where, {"label", "kind", "amplitude", "offset"});
  else if (spec.kind == "level_constants")
    only_keys(p, where, {"label", "kind", "values"}), numbers(need(p, "values", where), where + ".values");
  else if (spec.kind == "table")
    only_keys(p, where, {"label", "kind", "values"}), need(p, "values", where);
  else
    fail(where + ".kind", "unknown potential kind '" + spec.kind + "'");
  spec.parameters = p;
  return spec;
}

Nds make_family(const SystemSpec& s) {
  const std::string where = "system '" + s.label + "'";
  const auto& p = s.parameters;
  auto param = [&](const char* k) -> const json& { return need(p, k, where + ".parameters"); };
  auto pw = [&](const char* k) { return where + ".parameters." + k; };
  auto require_horizon = [&] {
    if (!s.horizon) fail(where, "family '" + s.family + "' needs a horizon");
    return *s.horizon;
  };
  if (s.family == "symbolic") {
    only_keys(p, where + ".parameters", {"alphabet_sizes", "L"});
    const auto sizes = ints(param("alphabet_sizes"), pw("alphabet_sizes"));
    const auto L = static_cast<int>(count(param("L"), pw("L"), 1));
    if (s.horizon && *s.horizon != static_cast<std::size_t>(L - 1))
      fail(where + ".horizon", "symbolic systems have horizon L - 1");
    return make_symbolic(sizes, L).system;
  }
  if (s.family == "circle_expanding") {
    only_keys(p, where + ".parameters", {"multipliers", "grid"});
    return make_circle_expanding(ints(param("multipliers"), pw("multipliers")), count(param("grid"), pw("grid")),
                                 require_horizon())
        .system;
  }
  if (s.family == "tent_sequence") {
    only_keys(p, where + ".parameters", {"slopes", "grid"});
    return make_tent_sequence(numbers(param("slopes"), pw("slopes")), count(param("grid"), pw("grid")),
                              require_horizon())
        .system;
  }
  if (s.family == "random") {
    only_keys(p, where + ".parameters", {"seed", "levels", "max_points"});
    const auto levels = count(param("levels"), pw("levels"), 1);
    if (s.horizon && *s.horizon + 1 != levels) fail(where + ".horizon", "random systems have horizon levels - 1");
    return make_random_system(count(param("seed"), pw("seed")), levels, count(param("max_points"), pw("max_points"), 1));
  }
  // custom_table: one square distance matrix per level, one map per step
  only_keys(p, where + ".parameters", {"tables", "maps"});
  std::vector<std::vector<double>> tables;
  for (const auto& rows : list<json>(param("tables"), pw("tables"), [](const json& v, const std::string&) { return v; })) {
    std::vector<double> flat;
    for (const auto& row : list<std::vector<double>>(rows, pw("tables"), numbers))
      flat.insert(flat.end(), row.begin(), row.end());
    tables.push_back(std::move(flat));
  }
  std::vector<std::vector<Index>> maps;
  for (const auto& m : list<std::vector<int>>(param("maps"), pw("maps"), ints)) {
    std::vector<Index> map;
    for (int v : m) {
      if (v < 0) fail(pw("maps"), "indices must be nonnegative");
      map.push_back(static_cast<Index>(v));
    }
    maps.push_back(std::move(map));
  }
  if (s.horizon && *s.horizon + 1 != tables.size()) fail(where + ".horizon", "custom systems have one table per level");
  return make_custom(s.label, tables, maps);
}

Potential make_potential(const PotentialSpec& spec, const Nds& nds) {
  const auto& p = spec.parameters;
  const std::string where = "potential '" + spec.label + "'";
  Potential f = Potential::zero(nds);
  if (spec.kind == "constant") {
    f = Potential::constant(nds, p["value"].get<double>());
  } else if (spec.kind == "first_coordinate") {
    f = first_coordinate_weight(nds, p.contains("scale") ? number(p["scale"], where + ".scale") : 1.0);
  } else if (spec.kind == "cosine") {
    f = cosine_of_position(nds, p.contains("amplitude") ? number(p["amplitude"], where + ".amplitude") : 1.0,
                           p.contains("offset") ? number(p["offset"], where + ".offset") : 0.0);
  } else if (spec.kind == "level_constants") {
    f = Potential::level_constants(nds, numbers(p["values"], where + ".values"));
  } else if (spec.kind == "table") {
    f = Potential(spec.label, list<std::vector<double>>(p["values"], where + ".values", numbers));
    f.check_compatible(nds);
  }
  return f.with_label(spec.label);
}

}  // namespace

Schedule parse_schedule(const json& b) {
  only_keys(b, "schedule",
            {"n_list", "eps_list", "tail_window", "mode", "exact_budget", "fallback", "jump_tolerance", "threads"});
  Schedule s;
  s.n_list = ints(need(b, "n_list", "schedule"), "schedule.n_list");
  s.eps_list = numbers(need(b, "eps_list", "schedule"), "schedule.eps_list");
  if (b.contains("tail_window")) s.tail_window = number(b["tail_window"], "schedule.tail_window");
  if (b.contains("mode")) {
    const auto m = text(b["mode"], "schedule.mode");
    if (m == "greedy")
      s.mode = SolveMode::greedy();
    else if (m != "exact")
      fail("schedule.mode", "expected 'exact' or 'greedy'");
  }
  if (b.contains("exact_budget")) s.mode.exact_budget = count(b["exact_budget"], "schedule.exact_budget", 1);
  if (b.contains("fallback")) s.mode.fallback = flag(b["fallback"], "schedule.fallback");
  if (b.contains("jump_tolerance")) s.jump_tolerance = number(b["jump_tolerance"], "schedule.jump_tolerance");
  if (b.contains("threads")) s.threads = count(b["threads"], "schedule.threads", 1);
  s.validate();
  return s;
}

RunConfig parse_config(const json& doc) {
  only_keys(doc, "config",
            {"systems", "potentials", "schedule", "checks", "products", "powers", "output_dir", "seed", "slack"});
  RunConfig cfg;
  const auto& systems = need(doc, "systems", "config");
  if (!systems.is_array() || systems.empty()) fail("config.systems", "expected a non-empty list");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    auto s = parse_system(systems[i], "systems[" + std::to_string(i) + "]");
    if (!labels.insert(s.label).second) fail("config.systems", "duplicate label '" + s.label + "'");
    cfg.systems.push_back(std::move(s));
  }
  const auto& pots = need(doc, "potentials", "config");
  if (!pots.is_array() || pots.empty()) fail("config.potentials", "expected a non-empty list");
  std::set<std::string> plabels;
  for (std::size_t i = 0; i < pots.size(); ++i) {
    auto p = parse_potential(pots[i], "potentials[" + std::to_string(i) + "]");
    if (!plabels.insert(p.label).second) fail("config.potentials", "duplicate label '" + p.label + "'");
    cfg.potentials.push_back(std::move(p));
  }
  for (const auto& s : cfg.systems)
    for (const auto& l : s.potentials)
      if (!plabels.count(l)) fail("system '" + s.label + "'", "unknown potential '" + l + "'");

  cfg.schedule = need(doc, "schedule", "config");
  if (!cfg.schedule.is_object()) fail("config.schedule", "expected an object");

  if (doc.contains("checks")) {
    cfg.checks = list<std::string>(doc["checks"], "config.checks", text);
    for (const auto& c : cfg.checks)
      if (std::find(check_ids().begin(), check_ids().end(), c) == check_ids().end())
        fail("config.checks", "unknown check '" + c + "'");
  }
  if (doc.contains("products"))
    for (const auto& pair : list<std::vector<std::string>>(doc["products"], "config.products",
                                                           [](const json& v, const std::string& w) {
                                                             return list<std::string>(v, w, text);
                                                           })) {
      if (pair.size() != 2) fail("config.products", "each entry names two systems");
      for (const auto& l : pair)
        if (!labels.count(l)) fail("config.products", "unknown system '" + l + "'");
      cfg.products.emplace_back(pair[0], pair[1]);
    }
  if (doc.contains("powers")) {
    cfg.powers = ints(doc["powers"], "config.powers");
    for (int m : cfg.powers)
      if (m < 1) fail("config.powers", "powers must be at least 1");
  }
  if (doc.contains("output_dir")) cfg.output_dir = text(doc["output_dir"], "config.output_dir");
  if (doc.contains("seed")) cfg.seed = count(doc["seed"], "config.seed");
  if (doc.contains("slack")) {
    only_keys(doc["slack"], "config.slack", {"symbolic", "grid"});
    if (doc["slack"].contains("symbolic")) cfg.symbolic_slack = number(doc["slack"]["symbolic"], "slack.symbolic");
    if (doc["slack"].contains("grid")) cfg.grid_slack = number(doc["slack"]["grid"], "slack.grid");
    if (cfg.symbolic_slack < 0 || cfg.grid_slack < 0) fail("config.slack", "slack must be nonnegative");
  }
  return cfg;
}

void apply(RunConfig& cfg, const Overrides& o) {
  if (o.out_dir) cfg.output_dir = *o.out_dir;
  if (o.seed) cfg.seed = *o.seed;
  auto patch = [&](json& b) {
    if (o.mode) b["mode"] = *o.mode;
    if (o.threads) b["threads"] = *o.threads;
  };
  patch(cfg.schedule);
  for (auto& s : cfg.systems)
    if (s.schedule) patch(*s.schedule);
}

HarnessConfig build(const RunConfig& cfg) {
  HarnessConfig h;
  h.schedule = parse_schedule(cfg.schedule);
  h.products = cfg.products;
  h.powers = cfg.powers;
  h.seed = cfg.seed;
  h.symbolic_slack = cfg.symbolic_slack;
  h.grid_slack = cfg.grid_slack;
  h.threads = h.schedule.threads;

  for (const auto& spec : cfg.systems) {
    Nds nds = [&] {
      try {
        return make_family(spec);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError("system '" + spec.label + "': " + e.what());
      }
    }();
    Schedule sch = spec.schedule ? parse_schedule(*spec.schedule) : h.schedule;
    if (spec.relabel_seed != 0) nds = apply_conjugacy(nds, make_relabel_conjugacy(nds, spec.relabel_seed));
    if (spec.bounded_metric) {
      nds = bounded_metric_transform(nds);
      for (auto& e : sch.eps_list) e = bounded_radius(e);
    }

    std::vector<Potential> pots;
    for (const auto& p : cfg.potentials) {
      if (!spec.potentials.empty() &&
          std::find(spec.potentials.begin(), spec.potentials.end(), p.label) == spec.potentials.end())
        continue;
      try {
        pots.push_back(make_potential(p, nds));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError("potential '" + p.label + "' on system '" + spec.label + "': " + e.what());
      }
    }

    if (spec.power > 1) {
      // whole blocks only, radii carried through the block modulus
      const int m = spec.power;
      std::vector<int> n_list;
      for (int n : sch.n_list)
        if (n * m <= nds.max_depth()) n_list.push_back(n);
      if (n_list.empty()) throw ScheduleError("system '" + spec.label + "': no depth fits the power");
      std::vector<double> eps;
      for (double e : sch.eps_list) {
        const double d = power_radius(nds, m, e);
        if (eps.empty() || d < eps.back()) eps.push_back(d);
      }
      for (auto& f : pots) f = power_potential(nds, f, m).with_label(f.label());
      nds = power_system(nds, m);
      sch.n_list = n_list;
      sch.eps_list = eps;
    }
    nds = nds.with_label(spec.label);
    sch.validate(nds);

    for (Index z : spec.subset)
      if (z >= nds.space(0).size()) throw ConfigError("system '" + spec.label + "': subset index out of range");

    HarnessSystem hs{spec.label, nds, std::move(pots), normalized(spec.subset)};
    const bool grid = spec.family == "circle_expanding" || spec.family == "tent_sequence";
    hs.slack_class = grid ? SlackClass::grid : SlackClass::symbolic;
    hs.equicontinuous = spec.equicontinuous.value_or(spec.family != "custom_table" && spec.family != "random");
    hs.homogeneous = spec.homogeneous.value_or(spec.family == "symbolic" && spec.subset.empty());
    hs.schedule = sch;
    h.systems.push_back(std::move(hs));
  }
  return h;
}

}  // namespace ndsp::cli

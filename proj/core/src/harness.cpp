#include "ndsp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "ndsp/model_zoo.hpp"
#include "parallel.hpp"

namespace ndsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// per-cell identities are exact up to rounding in exp/log
constexpr double kExactTol = 1e-12;

double mag(double v) { return std::isfinite(v) ? std::abs(v) : 0.0; }
double exact_tol(double a, double b) { return kExactTol * std::max({1.0, mag(a), mag(b)}); }

class Recorder {
 public:
  Recorder(TheoremCheck& check, const HarnessConfig& cfg, const char* id) : check_(check), cfg_(cfg) {
    check_.theorem_id = id;
  }

  void use(const std::string& system, const std::string& potential) {
    if (systems_.insert(system).second) check_.systems.push_back(system);
    if (potentials_.insert(potential).second) check_.potentials.push_back(potential);
  }

  double slack(SlackClass cls, double a, double b) {
    if (cls == SlackClass::grid) {
      check_.slack = std::max(check_.slack, cfg_.grid_slack);
      return cfg_.grid_slack * std::max({1.0, mag(a), mag(b)});
    }
    check_.slack = std::max(check_.slack, cfg_.symbolic_slack);
    return cfg_.symbolic_slack;
  }

  void schedule_used(const Schedule& s) {
    downgraded_ = downgraded_ || !s.mode.exact();
  }
  void certified(bool ok) { downgraded_ = downgraded_ || !ok; }

  // lhs <= rhs + tol; equal infinities pass
  void le(const std::string& sys, const std::string& pot, const std::string& relation, int n, double eps,
          double lhs, double rhs, double tol) {
    const bool ok = !std::isnan(lhs) && !std::isnan(rhs) && (lhs == rhs || lhs <= rhs + tol);
    record(ok, {sys, pot, relation, n, eps, lhs, rhs});
  }

  void eq(const std::string& sys, const std::string& pot, const std::string& relation, int n, double eps,
          double lhs, double rhs, double tol) {
    const bool ok = lhs == rhs || std::abs(lhs - rhs) <= tol;
    record(ok, {sys, pot, relation, n, eps, lhs, rhs});
  }

  void diag(const std::string& sys, const std::string& pot, const std::string& name, double value) {
    check_.diagnostics.push_back({sys, pot, name, value});
  }

  void finish() {
    if (check_.assertions == 0)
      check_.status = CheckStatus::not_applicable;
    else if (downgraded_)
      check_.status = CheckStatus::diagnostic;
    else
      check_.status = check_.violations ? CheckStatus::fail : CheckStatus::pass;
    if (downgraded_ && check_.note.empty()) check_.note = "uncertified cells; reported without asserting";
  }

 private:
  void record(bool ok, Witness w) {
    ++check_.assertions;
    if (ok) return;
    ++check_.violations;
    if (check_.witnesses.size() < cfg_.max_witnesses) check_.witnesses.push_back(std::move(w));
  }

  TheoremCheck& check_;
  const HarnessConfig& cfg_;
  bool downgraded_ = false;
  std::set<std::string> systems_, potentials_;
};

Schedule schedule_for(const HarnessSystem& sys, const HarnessConfig& cfg) {
  Schedule s = sys.schedule.value_or(cfg.schedule);
  s.validate(sys.system);
  return s;
}

PointSet z_for(const HarnessSystem& sys) {
  return sys.Z.empty() ? all_points(sys.system.space(0).size()) : normalized(sys.Z);
}

bool certified(const PressureReport& r) {
  return r.capacity.span_lower.certified() && r.capacity.span_upper.certified() &&
         r.capacity.sep_lower.certified() && r.capacity.sep_upper.certified() && r.bowen.certified() &&
         r.packing.certified();
}

bool all_certified(const std::vector<Cell>& cells) {
  return std::all_of(cells.begin(), cells.end(), [](const Cell& c) { return c.certified; });
}

double log_raw(const Cell& c) { return std::log(c.value); }

PressureEstimate estimate_from(std::string kind, std::vector<Cell> cells, const Schedule& schedule, bool lower) {
  PressureEstimate est;
  est.kind = std::move(kind);
  est.cells = std::move(cells);
  detail::summarize(est, schedule, lower, kExactTol);
  return est;
}

double hint_width(const Nds& nds, const Potential& f) {
  return std::log(static_cast<double>(nds.space(0).size())) + sup_norm(f) + 1.0;
}

// window extremes of (1/n) log of the raw values at one radius
std::pair<double, double> window(const std::vector<Cell>& cells, const std::vector<int>& depths, double eps,
                                 double scale = 1.0) {
  double lo = kInf, hi = -kInf;
  for (const auto& c : cells) {
    if (c.eps != eps || std::find(depths.begin(), depths.end(), c.n) == depths.end()) continue;
    lo = std::min(lo, scale * c.log_value);
    hi = std::max(hi, scale * c.log_value);
  }
  return {lo, hi};
}

Potential dyadic_noise(const Nds& nds, std::mt19937_64& rng, std::size_t levels, const std::string& label) {
  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k <= nds.horizon(); ++k) {
    std::vector<double> level(nds.space(k).size(), 0.0);
    if (k < levels)
      for (auto& v : level) v = static_cast<double>(static_cast<int>(rng() % 33) - 16) / 64.0;
    values.push_back(std::move(level));
  }
  return Potential(label, std::move(values));
}

PointSet shuffled(PointSet Z, std::mt19937_64& rng) {
  for (std::size_t i = Z.size(); i > 1; --i) std::swap(Z[i - 1], Z[rng() % i]);
  return Z;
}

std::mt19937_64 rng_for(const HarnessConfig& cfg, std::size_t system_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(system_index)};
  return std::mt19937_64(seq);
}

const HarnessSystem& find_system(const HarnessConfig& cfg, const std::string& label) {
  for (const auto& s : cfg.systems)
    if (s.label == label) return s;
  throw std::invalid_argument("unknown system label: " + label);
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "n/a";
    case CheckStatus::diagnostic: return "diagnostic";
  }
  return "?";
}

PressureReport all_pressures(const Nds& nds, const Potential& f, PointView Z, const Schedule& schedule) {
  return {capacity_pressures(nds, f, Z, schedule), bowen_pressure(nds, f, Z, schedule),
          packing_pressure(nds, f, Z, schedule)};
}

double power_radius(const Nds& nds, int m, double eps) {
  if (m < 1) throw std::invalid_argument("power must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("radius must be positive");
  const std::size_t H = nds.horizon();
  const auto step = static_cast<std::size_t>(m);
  double min_bad = kInf;
  for (std::size_t k = 0; k <= H; k += step) {
    const auto& rows = nds.trajectories(k).rows;
    const auto& sp = nds.space(k);
    const std::size_t span = std::min(step, H - k + 1);
    for (Index x = 0; x < sp.size(); ++x)
      for (Index y = x + 1; y < sp.size(); ++y) {
        const double d = sp.dist(x, y);
        if (d >= min_bad) continue;
        double g = d;
        for (std::size_t j = 1; j < span && g <= eps; ++j)
          g = std::max(g, nds.space(k + j).dist(rows[j][x], rows[j][y]));
        if (g > eps) min_bad = d;
      }
  }
  if (min_bad == kInf) return eps;
  double safe = 0.0;
  for (std::size_t k = 0; k <= H; k += step) {
    const auto& sp = nds.space(k);
    for (Index x = 0; x < sp.size(); ++x)
      for (Index y = x + 1; y < sp.size(); ++y) {
        const double d = sp.dist(x, y);
        if (d < min_bad) safe = std::max(safe, d);
      }
  }
  return 0.5 * (safe + min_bad);
}

TheoremCheck check_inequality_chain(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "inequality_chain");
  for (const auto& sys : cfg.systems) {
    const auto sch = schedule_for(sys, cfg);
    r.schedule_used(sch);
    const auto Z = z_for(sys);
    for (const auto& f : sys.potentials) {
      r.use(sys.label, f.label());
      const auto rep = all_pressures(sys.system, f, Z, sch);
      r.certified(certified(rep));
      const double QL = rep.capacity.span_lower.value, QU = rep.capacity.span_upper.value;
      const double PL = rep.capacity.sep_lower.value, PU = rep.capacity.sep_upper.value;
      const double PB = rep.bowen.value, PP = rep.packing.value;
      const double eps = sch.smallest_eps();
      auto le = [&](const char* rel, double a, double b, bool measure) {
        const double tol = r.slack(sys.slack_class, a, b) + (measure ? sch.jump_tolerance : 0.0);
        r.le(sys.label, f.label(), rel, 0, eps, a, b, tol);
      };
      le("P^B <= Q_lower", PB, QL, true);
      le("Q_lower <= Q_upper", QL, QU, false);
      le("P^B <= P_lower", PB, PL, true);
      le("P_lower <= P_upper", PL, PU, false);
      le("P^B <= P^P", PB, PP, true);
      le("P^P <= P_upper", PP, PU, true);
      r.diag(sys.label, f.label(), "span_lower", QL);
      r.diag(sys.label, f.label(), "span_upper", QU);
      r.diag(sys.label, f.label(), "sep_lower", PL);
      r.diag(sys.label, f.label(), "sep_upper", PU);
      r.diag(sys.label, f.label(), "bowen", PB);
      r.diag(sys.label, f.label(), "packing", PP);
    }
  }
  r.finish();
  return out;
}

TheoremCheck check_subset_properties(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "subset_properties");
  for (std::size_t si = 0; si < cfg.systems.size(); ++si) {
    const auto& sys = cfg.systems[si];
    const auto& nds = sys.system;
    const auto sch = schedule_for(sys, cfg);
    r.schedule_used(sch);
    const auto Z = z_for(sys);
    auto rng = rng_for(cfg, si);
    const auto order = shuffled(Z, rng);
    const PointSet Z2 = normalized(PointSet(order.begin(), order.begin() + static_cast<long>((2 * Z.size() + 2) / 3)));
    const PointSet Z1 = normalized(PointSet(order.begin(), order.begin() + static_cast<long>((Z.size() + 2) / 3)));
    const PointSet A = normalized(PointSet(order.begin(), order.begin() + static_cast<long>(Z.size() / 2)));
    const PointSet B = normalized(PointSet(order.begin() + static_cast<long>(Z.size() / 2), order.end()));
    const double eps_min = sch.smallest_eps();
    const int tail_min = sch.tail_start();

    // closure and idempotence are identities on finite spaces
    {
      std::size_t closure = 0;
      const auto& sp = nds.space(0);
      for (Index x = 0; x < sp.size(); ++x) {
        bool hit = false;
        for (Index z : Z)
          if (sp.dist(x, z) == 0.0) {
            hit = true;
            break;
          }
        closure += hit ? 1 : 0;
      }
      r.eq(sys.label, "-", "closure(Z) = Z", 0, 0.0, static_cast<double>(closure), static_cast<double>(Z.size()), 0.0);
      PointSet doubled = Z;
      doubled.insert(doubled.end(), Z.begin(), Z.end());
      r.eq(sys.label, "-", "Z u Z = Z", 0, 0.0, static_cast<double>(normalized(doubled).size()),
           static_cast<double>(Z.size()), 0.0);
    }

    for (const auto& f : sys.potentials) {
      r.use(sys.label, f.label());
      const auto& fl = f.label();
      for (bool sep : {false, true}) {
        const char* kind = sep ? "P_n" : "Q_n";
        const auto c1 = partition_cells(nds, f, Z1, sep, sch);
        const auto c2 = partition_cells(nds, f, Z2, sep, sch);
        r.certified(all_certified(c1) && all_certified(c2));
        for (std::size_t i = 0; i < c1.size(); ++i)
          r.le(sys.label, fl, std::string(kind) + "(Z1) <= " + kind + "(Z2)", c1[i].n, c1[i].eps, log_raw(c1[i]),
               log_raw(c2[i]), exact_tol(log_raw(c1[i]), log_raw(c2[i])));
      }

      if (A.empty() || B.empty()) continue;
      const auto ca = partition_cells(nds, f, A, true, sch);
      const auto cb = partition_cells(nds, f, B, true, sch);
      const auto cz = partition_cells(nds, f, Z, true, sch);
      r.certified(all_certified(ca) && all_certified(cb) && all_certified(cz));
      for (std::size_t i = 0; i < cz.size(); ++i) {
        const double sum = ca[i].value + cb[i].value;
        r.le(sys.label, fl, "P_n(A u B) <= P_n(A) + P_n(B)", cz[i].n, cz[i].eps, cz[i].value, sum,
             kExactTol * std::max(1.0, sum));
        const double mx = std::max(log_raw(ca[i]), log_raw(cb[i]));
        r.le(sys.label, fl, "max P_n(parts) <= P_n(A u B)", cz[i].n, cz[i].eps, mx, log_raw(cz[i]),
             exact_tol(mx, log_raw(cz[i])));
      }
      const double ua = estimate_from("a", ca, sch, false).value;
      const double ub = estimate_from("b", cb, sch, false).value;
      const double uz = estimate_from("z", cz, sch, false).value;
      const double mx = std::max(ua, ub);
      const double bias = std::log(2.0) / tail_min;
      r.le(sys.label, fl, "max sep_upper(parts) <= sep_upper(A u B)", 0, eps_min, mx, uz, exact_tol(mx, uz));
      r.le(sys.label, fl, "sep_upper(A u B) <= max sep_upper(parts) + log 2 / n", 0, eps_min, uz, mx + bias,
           exact_tol(uz, mx + bias));
      r.diag(sys.label, fl, "sep_upper union minus max", uz - mx);

      // Bowen pressure over the two-part union
      const auto ba = bowen_pressure(nds, f, A, sch);
      const auto bb = bowen_pressure(nds, f, B, sch);
      const auto bz = bowen_pressure(nds, f, Z, sch);
      r.certified(ba.certified() && bb.certified() && bz.certified());
      const double jt = 2.0 * sch.jump_tolerance;
      const double bmax = std::max(ba.value, bb.value);
      r.le(sys.label, fl, "max P^B(parts) <= P^B(A u B)", 0, eps_min, bmax, bz.value, jt);
      r.le(sys.label, fl, "P^B(A u B) <= max P^B(parts) + log 2 / N", 0, eps_min, bz.value,
           bmax + std::log(2.0) / sch.tail_start(), jt + kExactTol);
      r.diag(sys.label, fl, "bowen union minus max", bz.value - bmax);

      // packing pressure with the union pool built from the parts' pools
      const auto pa = default_partition_pool(nds, A, sch.eps_list);
      const auto pb = default_partition_pool(nds, B, sch.eps_list);
      std::vector<Partition> pz;
      for (const auto& p : pa)
        for (const auto& q : pb) {
          Partition joined = p;
          joined.insert(joined.end(), q.begin(), q.end());
          pz.push_back(std::move(joined));
        }
      const int depth = sch.max_n();
      const double h = hint_width(nds, f);
      bool cert = true;
      auto s_star = [&](const PointSet& part, const std::vector<Partition>& pool) {
        return jump_point(
                   [&](double s) {
                     const auto v = modified_packing_value(nds, f, s, eps_min, part, pool, depth, sch.mode);
                     cert = cert && v.certified;
                     return v.value;
                   },
                   -h, h, sch.jump_tolerance)
            .s_star;
      };
      const double sa = s_star(A, pa), sb = s_star(B, pb), sz = s_star(Z, pz);
      r.certified(cert);
      const double pmax = std::max(sa, sb);
      r.le(sys.label, fl, "max P^P(parts) <= P^P(A u B)", 0, eps_min, pmax, sz, jt);
      r.le(sys.label, fl, "P^P(A u B) <= max P^P(parts) + log 2 / n", 0, eps_min, sz,
           pmax + std::log(2.0) / depth, jt + kExactTol);
      r.diag(sys.label, fl, "packing union minus max", sz - pmax);
    }
  }
  r.finish();
  return out;
}

TheoremCheck check_potential_properties(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "potential_properties");
  constexpr double kShift = 0.5;
  constexpr std::size_t kTailLevels = 2;
  for (std::size_t si = 0; si < cfg.systems.size(); ++si) {
    const auto& sys = cfg.systems[si];
    const auto& nds = sys.system;
    const auto sch = schedule_for(sys, cfg);
    r.schedule_used(sch);
    const auto Z = z_for(sys);
    auto rng = rng_for(cfg, si);
    const auto zero = Potential::zero(nds);
    for (const auto& f : sys.potentials) {
      r.use(sys.label, f.label());
      const auto& fl = f.label();
      const auto noise = dyadic_noise(nds, rng, nds.horizon() + 1, "noise");
      const auto head = dyadic_noise(nds, rng, kTailLevels, "head");
      const Potential shifted = f.plus_constant(kShift);
      const Potential above = (f + f.abs()).plus_constant(0.25);
      const Potential absf = f.abs();
      const Potential near = f + noise;
      const Potential tail = f + head;
      const Potential twice = f.scaled(2.0);
      const Potential half = f.scaled(0.5);
      const double gap = sup_norm(noise);

      for (bool sep : {false, true}) {
        const std::string k = sep ? "P" : "Q";
        auto cells = [&](const Potential& g) {
          auto c = partition_cells(nds, g, Z, sep, sch);
          r.certified(all_certified(c));
          return c;
        };
        const auto base = cells(f);
        const auto c_shift = cells(shifted);
        const auto c_above = cells(above);
        const auto c_abs = cells(absf);
        const auto c_zero = cells(zero);
        const auto c_near = cells(near);
        const auto c_tail = cells(tail);
        const auto c_twice = cells(twice);
        const auto c_half = cells(half);
        for (std::size_t i = 0; i < base.size(); ++i) {
          const int n = base[i].n;
          const double eps = base[i].eps;
          const double v = base[i].log_value;
          auto le = [&](const std::string& rel, double a, double b) {
            r.le(sys.label, fl, k + ": " + rel, n, eps, a, b, exact_tol(a, b));
          };
          r.eq(sys.label, fl, k + ": cell(f + a) = cell(f) + a", n, eps, c_shift[i].log_value, v + kShift,
               exact_tol(v, v + kShift));
          le("cell(f) <= cell(g) for f <= g", v, c_above[i].log_value);
          if (sep) le("|cell(f)| <= cell(|f|)", std::abs(v), c_abs[i].log_value);

          double lo = kInf, hi = -kInf;
          for (int j = 0; j < n; ++j) {
            const auto& vals = f.values(static_cast<std::size_t>(j));
            lo = std::min(lo, *std::min_element(vals.begin(), vals.end()));
            hi = std::max(hi, *std::max_element(vals.begin(), vals.end()));
          }
          le("h + inf f <= cell(f)", c_zero[i].log_value + lo, v);
          le("cell(f) <= h + sup f", v, c_zero[i].log_value + hi);

          if (std::isfinite(v)) {
            le("|cell(f) - cell(g)| <= |f - g|", std::abs(v - c_near[i].log_value), gap);
            double budget = 0.0;
            for (std::size_t j = 0; j < std::min<std::size_t>(kTailLevels, static_cast<std::size_t>(n)); ++j)
              budget += sup_norm_levels(head, j, j + 1);
            le("|cell(f) - cell(g)| <= head sum / n", std::abs(v - c_tail[i].log_value), budget / n);
            le("cell(2f) <= 2 cell(f)", c_twice[i].log_value, 2.0 * v);
            le("cell(f/2) >= cell(f)/2", 0.5 * v, c_half[i].log_value);
          }
        }
      }
    }
  }
  r.finish();
  return out;
}

TheoremCheck check_power_rule(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "power_rule");
  for (const auto& sys : cfg.systems) {
    const auto& src = sys.system;
    const auto sch = schedule_for(sys, cfg);
    r.schedule_used(sch);
    const auto Z = z_for(sys);
    for (int m : cfg.powers) {
      if (m < 1) throw std::invalid_argument("power must be at least 1");
      std::vector<int> pn, sn;
      for (int n : sch.n_list)
        if (n * m <= src.max_depth()) {
          pn.push_back(n);
          sn.push_back(n * m);
        }
      if (pn.empty()) continue;
      const Nds pow = power_system(src, m);
      Schedule psch = sch;
      psch.n_list = pn;
      Schedule ssch = sch;
      ssch.n_list = sn;
      std::vector<double> deltas;
      for (double eps : sch.eps_list) deltas.push_back(power_radius(src, m, eps));
      const std::string tag = "m=" + std::to_string(m) + ": ";

      for (const auto& f : sys.potentials) {
        r.use(sys.label, f.label());
        const auto fm = power_potential(src, f, m);
        const auto sc = partition_cells(src, f, Z, true, ssch);
        const auto pc = partition_cells(pow, fm, Z, true, psch);
        r.certified(all_certified(sc) && all_certified(pc));
        std::vector<Cell> dc;  // power cells at the mapped radii, labelled by source eps
        for (std::size_t e = 0; e < deltas.size(); ++e) {
          Schedule one = psch;
          one.eps_list = {deltas[e]};
          for (auto c : partition_cells(pow, fm, Z, true, one)) {
            r.certified(c.certified);
            c.eps = sch.eps_list[e];
            dc.push_back(c);
          }
        }
        for (std::size_t i = 0; i < pc.size(); ++i) {
          const double a = log_raw(pc[i]), b = log_raw(sc[i]), c = log_raw(dc[i]);
          r.le(sys.label, f.label(), tag + "P_n(T^m, eps) <= P_nm(T, eps)", pc[i].n, pc[i].eps, a, b,
               exact_tol(a, b));
          r.le(sys.label, f.label(), tag + "P_nm(T, eps) <= P_n(T^m, delta(eps))", pc[i].n, pc[i].eps, b, c,
               exact_tol(b, c));
        }

        const double eps = sch.smallest_eps();
        const auto tail = psch.tail();
        const auto [plo, phi] = window(dc, tail, eps);
        std::vector<Cell> sc_as_power = sc;
        for (std::size_t i = 0; i < sc.size(); ++i) sc_as_power[i].n = pc[i].n;
        const auto [slo, shi] = window(sc_as_power, tail, eps, static_cast<double>(m));
        r.diag(sys.label, f.label(), tag + "power sep_upper", phi);
        r.diag(sys.label, f.label(), tag + "m * source sep_upper", shi);
        if (sys.equicontinuous) {
          r.eq(sys.label, f.label(), tag + "sep_lower(T^m) = m sep_lower(T)", 0, eps, plo, slo,
               r.slack(sys.slack_class, plo, slo));
          r.eq(sys.label, f.label(), tag + "sep_upper(T^m) = m sep_upper(T)", 0, eps, phi, shi,
               r.slack(sys.slack_class, phi, shi));
        }
      }
    }
  }
  r.finish();
  return out;
}

TheoremCheck check_product_rules(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "product_rules");
  for (const auto& [la, lb] : cfg.products) {
    const auto& A = find_system(cfg, la);
    const auto& B = find_system(cfg, lb);
    const Nds prod = product_system(A.system, B.system);
    const std::string label = la + " x " + lb;
    const auto sch = schedule_for(A, cfg);
    sch.validate(prod);
    r.schedule_used(sch);
    const auto Za = z_for(A), Zb = z_for(B);
    PointSet Zp;
    for (Index i : Za)
      for (Index j : Zb) Zp.push_back(product_index(B.system, 0, i, j));
    const SlackClass cls =
        A.slack_class == SlackClass::grid || B.slack_class == SlackClass::grid ? SlackClass::grid : SlackClass::symbolic;
    const double eps_min = sch.smallest_eps();
    for (const auto& fa : A.potentials)
      for (const auto& fb : B.potentials) {
        const auto fg = product_potential(fa, fb).with_label(fa.label() + "+" + fb.label());
        r.use(label, fg.label());
        for (bool sep : {false, true}) {
          const auto ca = partition_cells(A.system, fa, Za, sep, sch);
          const auto cb = partition_cells(B.system, fb, Zb, sep, sch);
          const auto cp = partition_cells(prod, fg, Zp, sep, sch);
          r.certified(all_certified(ca) && all_certified(cb) && all_certified(cp));
          for (std::size_t i = 0; i < cp.size(); ++i) {
            const double sum = log_raw(ca[i]) + log_raw(cb[i]), p = log_raw(cp[i]);
            if (sep)
              r.le(label, fg.label(), "P_n(a) P_n(b) <= P_n(a x b)", cp[i].n, cp[i].eps, sum, p, exact_tol(sum, p));
            else
              r.le(label, fg.label(), "Q_n(a x b) <= Q_n(a) Q_n(b)", cp[i].n, cp[i].eps, p, sum, exact_tol(sum, p));
          }
        }

        const auto ra = all_pressures(A.system, fa, Za, sch);
        const auto rb = all_pressures(B.system, fb, Zb, sch);
        const auto rp = all_pressures(prod, fg, Zp, sch);
        r.certified(certified(ra) && certified(rb) && certified(rp));
        const double PLa = ra.capacity.sep_lower.value, PUa = ra.capacity.sep_upper.value;
        const double PLb = rb.capacity.sep_lower.value, PUb = rb.capacity.sep_upper.value;
        const double PLp = rp.capacity.sep_lower.value;
        const double PBa = ra.bowen.value, PPa = ra.packing.value, PBb = rb.bowen.value, PPb = rb.packing.value;
        const double PBp = rp.bowen.value, PPp = rp.packing.value;
        r.diag(label, fg.label(), "sep_lower", PLp);
        r.diag(label, fg.label(), "sep_upper", rp.capacity.sep_upper.value);
        r.diag(label, fg.label(), "bowen", PBp);
        r.diag(label, fg.label(), "packing", PPp);
        if (!(A.equicontinuous && B.equicontinuous)) continue;
        const double jt = 3.0 * sch.jump_tolerance;
        auto le = [&](const char* rel, double a, double b, bool measure) {
          r.le(label, fg.label(), rel, 0, eps_min, a, b, r.slack(cls, a, b) + (measure ? jt : 0.0));
        };
        auto eq = [&](const char* rel, double a, double b, bool measure) {
          r.eq(label, fg.label(), rel, 0, eps_min, a, b, r.slack(cls, a, b) + (measure ? jt : 0.0));
        };
        le("P_lower(a) + P_lower(b) <= P_lower(a x b)", PLa + PLb, PLp, false);
        le("P_lower(a x b) <= P_lower(a) + P_upper(b)", PLp, PLa + PUb, false);
        le("P^B(a) + P^B(b) <= P^B(a x b)", PBa + PBb, PBp, true);
        le("P^B(a x b) <= P^B(a) + P^P(b)", PBp, PBa + PPb, true);
        le("P^B(a) + P^P(b) <= P^P(a x b)", PBa + PPb, PPp, true);
        le("P^P(a x b) <= P^P(a) + P^P(b)", PPp, PPa + PPb, true);
        const double sa = r.slack(cls, PLa, PUa), sb = r.slack(cls, PLb, PUb);
        if (std::abs(PUa - PLa) <= sa || std::abs(PUb - PLb) <= sb)
          eq("P_lower(a x b) = P_lower(a) + P_lower(b)", PLp, PLa + PLb, false);
        if (std::abs(PPb - PBb) <= r.slack(cls, PPb, PBb) + sch.jump_tolerance)
          eq("P^B(a x b) = P^B(a) + P^B(b)", PBp, PBa + PBb, true);
        if (std::abs(PPa - PBa) <= r.slack(cls, PPa, PBa) + sch.jump_tolerance)
          eq("P^P(a x b) = P^P(a) + P^P(b)", PPp, PPa + PPb, true);
      }
  }
  r.finish();
  return out;
}

TheoremCheck check_invariance(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "invariance");
  for (const auto& sys : cfg.systems) {
    const auto& nds = sys.system;
    const auto sch = schedule_for(sys, cfg);
    r.schedule_used(sch);
    const auto Z = z_for(sys);
    const auto conj = make_relabel_conjugacy(nds, cfg.seed);
    const Nds Y = apply_conjugacy(nds, conj);
    std::vector<std::vector<Index>> inverse;
    for (const auto& p : conj.pi) {
      std::vector<Index> inv(p.size());
      for (Index x = 0; x < p.size(); ++x) inv[p[x]] = x;
      inverse.push_back(std::move(inv));
    }
    PointSet ZY;
    for (Index z : Z) ZY.push_back(conj.pi[0][z]);
    ZY = normalized(std::move(ZY));

    Schedule bsch = sch;
    for (auto& e : bsch.eps_list) e = bounded_radius(e);
    const Nds bounded = bounded_metric_transform(nds);

    for (const auto& f : sys.potentials) {
      r.use(sys.label, f.label());
      const auto& fl = f.label();
      const auto fy = pullback(inverse, f).with_label(fl);
      auto same = [&](const std::string& what, const std::vector<Cell>& a, const std::vector<Cell>& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
          r.eq(sys.label, fl, "relabel: " + what, a[i].n, a[i].eps, a[i].log_value, b[i].log_value, 0.0);
      };
      for (bool sep : {false, true}) {
        const auto a = partition_cells(nds, f, Z, sep, sch);
        const auto b = partition_cells(Y, fy, ZY, sep, sch);
        r.certified(all_certified(a) && all_certified(b));
        same(sep ? "P_n" : "Q_n", a, b);
      }
      const auto ba = bowen_pressure(nds, f, Z, sch), bb = bowen_pressure(Y, fy, ZY, sch);
      const auto pa = packing_pressure(nds, f, Z, sch), pb = packing_pressure(Y, fy, ZY, sch);
      r.certified(ba.certified() && bb.certified() && pa.certified() && pb.certified());
      same("P^B", ba.cells, bb.cells);
      same("P^P", pa.cells, pb.cells);

      const auto ro = all_pressures(nds, f, Z, sch);
      const auto rb = all_pressures(bounded, f, Z, bsch);
      r.certified(certified(ro) && certified(rb));
      const double eps = sch.smallest_eps();
      auto close = [&](const char* what, double a, double b, bool measure) {
        r.eq(sys.label, fl, std::string("d/(1+d): ") + what, 0, eps, a, b,
             r.slack(sys.slack_class, a, b) + (measure ? 2.0 * sch.jump_tolerance : 0.0));
      };
      close("span_lower", ro.capacity.span_lower.value, rb.capacity.span_lower.value, false);
      close("span_upper", ro.capacity.span_upper.value, rb.capacity.span_upper.value, false);
      close("sep_lower", ro.capacity.sep_lower.value, rb.capacity.sep_lower.value, false);
      close("sep_upper", ro.capacity.sep_upper.value, rb.capacity.sep_upper.value, false);
      close("bowen", ro.bowen.value, rb.bowen.value, true);
      close("packing", ro.packing.value, rb.packing.value, true);
      r.diag(sys.label, fl, "bounded sep_upper", rb.capacity.sep_upper.value);
    }
  }
  r.finish();
  return out;
}

TheoremCheck check_homogeneous_collapse(const HarnessConfig& cfg) {
  TheoremCheck out;
  Recorder r(out, cfg, "homogeneous_collapse");
  for (const auto& sys : cfg.systems) {
    if (!sys.homogeneous) continue;
    const auto sch = schedule_for(sys, cfg);
    r.schedule_used(sch);
    const auto Z = z_for(sys);
    // the largest number of parts among pooled decompositions with non-singleton parts
    std::size_t parts = 1;
    for (const auto& p : default_partition_pool(sys.system, Z, sch.eps_list))
      if (p.size() < Z.size() || Z.size() == 1) parts = std::max(parts, p.size());
    const double bias = std::log(static_cast<double>(parts)) / sch.tail_start();
    const double eps = sch.smallest_eps();
    for (const auto& f : sys.potentials) {
      r.use(sys.label, f.label());
      const auto sep = capacity_pressure(sys.system, f, Z, CapacityKind::sep_upper, sch);
      const auto pk = packing_pressure(sys.system, f, Z, sch);
      r.certified(sep.certified() && pk.certified());
      const double PU = sep.value, PP = pk.value;
      r.eq(sys.label, f.label(), "P^P = P_upper", 0, eps, PP, PU,
           r.slack(sys.slack_class, PP, PU) + sch.jump_tolerance);
      r.le(sys.label, f.label(), "P_upper - log k / n <= min over pool of max part", 0, eps, PU - bias,
           pk.alternative, r.slack(sys.slack_class, PU, pk.alternative));
      r.diag(sys.label, f.label(), "inf-sup alternative", pk.alternative);
    }
  }
  if (out.systems.empty()) out.note = "no system satisfies the homogeneity hypothesis";
  r.finish();
  return out;
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{"homogeneous_collapse", "inequality_chain", "invariance",
                                            "potential_properties", "power_rule", "product_rules",
                                            "subset_properties"};
  return ids;
}

TheoremCheck run_check(const std::string& id, const HarnessConfig& cfg) {
  if (id == "homogeneous_collapse") return check_homogeneous_collapse(cfg);
  if (id == "inequality_chain") return check_inequality_chain(cfg);
  if (id == "invariance") return check_invariance(cfg);
  if (id == "potential_properties") return check_potential_properties(cfg);
  if (id == "power_rule") return check_power_rule(cfg);
  if (id == "product_rules") return check_product_rules(cfg);
  if (id == "subset_properties") return check_subset_properties(cfg);
  throw std::invalid_argument("unknown check: " + id);
}

std::vector<TheoremCheck> run_checks(const std::vector<std::string>& ids_in, const HarnessConfig& cfg) {
  std::vector<std::string> ids = ids_in.empty() ? check_ids() : ids_in;
  for (const auto& id : ids)
    if (std::find(check_ids().begin(), check_ids().end(), id) == check_ids().end())
      throw std::invalid_argument("unknown check: " + id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<TheoremCheck> out(ids.size());
  detail::parallel_for(ids.size(), cfg.threads, [&](std::size_t i) { out[i] = run_check(ids[i], cfg); });
  return out;
}

}  // namespace ndsp

#include "ndsp/span_sep.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ndsp {

namespace {

void check_request(const Nds& nds, PointView Z, int n, double eps) {
  if (n < 1) throw std::invalid_argument("depth must be at least 1");
  if (!(eps > 0.0) || std::isinf(eps)) throw std::invalid_argument("radius must be positive and finite");
  nds.check_depth(0, n);
  for (Index z : Z)
    if (z >= nds.space(0).size()) throw std::out_of_range("point " + std::to_string(z) + " not in X_0");
}

std::vector<double> exp_sums(const Nds& nds, const Potential* f, int n) {
  if (!f) return std::vector<double>(nds.space(0).size(), 1.0);
  f->check_compatible(nds);
  auto s = birkhoff_sums(nds, *f, 0, n);
  for (double& v : s) v = std::exp(v);
  return s;
}

// position of each X_0 point inside Z, or -1
std::vector<long> positions(const Nds& nds, const PointSet& Z) {
  std::vector<long> pos(nds.space(0).size(), -1);
  for (std::size_t i = 0; i < Z.size(); ++i) pos[Z[i]] = static_cast<long>(i);
  return pos;
}

double objective_of(const PointSet& chosen, const std::vector<double>& w) {
  std::vector<double> terms;
  for (Index x : chosen) terms.push_back(w[x]);
  return sorted_sum(std::move(terms));
}

}  // namespace

bool spans(const Nds& nds, PointView Z, PointView F, int n, double eps) {
  for (Index z : Z) {
    bool hit = false;
    for (Index y : F)
      if (nds.bowen_distance(0, n, z, y) <= eps) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

bool is_separated(const Nds& nds, PointView E, int n, double eps) {
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = i + 1; j < E.size(); ++j)
      if (!(nds.bowen_distance(0, n, E[i], E[j]) > eps)) return false;
  return true;
}

SpanSepResult minimal_spanning(const Nds& nds, PointView Zin, int n, double eps, const SolveMode& mode,
                               const Potential* weights) {
  check_request(nds, Zin, n, eps);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  SpanSepResult out;
  out.certified = mode.exact();
  if (Z.empty()) return out;

  const auto w = exp_sums(nds, weights, n);
  const auto pos = positions(nds, Z);
  const auto& nb = nds.neighborhoods(eps, true).neighbors(n);
  CoverProblem problem;
  problem.elements = Z.size();
  std::vector<Index> centers;
  for (Index c = 0; c < nds.space(0).size(); ++c) {
    PointSet covered;
    for (Index y : nb[c])
      if (pos[y] >= 0) covered.push_back(static_cast<Index>(pos[y]));
    if (covered.empty()) continue;
    centers.push_back(c);
    problem.sets.push_back(std::move(covered));
    problem.weights.push_back(w[c]);
  }
  const auto sel = min_weight_cover(problem, mode);
  for (std::size_t i : sel.chosen) out.chosen.push_back(centers[i]);
  out.chosen = normalized(std::move(out.chosen));
  out.objective = objective_of(out.chosen, w);
  out.certified = sel.certified;
  if (!spans(nds, Z, out.chosen, n, eps)) throw std::logic_error("spanning solver returned a non-spanning set");
  return out;
}

SpanSepResult maximal_separated(const Nds& nds, PointView Zin, int n, double eps, const SolveMode& mode,
                                const Potential* weights) {
  check_request(nds, Zin, n, eps);
  const PointSet Z = normalized(PointSet(Zin.begin(), Zin.end()));
  SpanSepResult out;
  out.certified = mode.exact();
  if (Z.empty()) return out;

  const auto w = exp_sums(nds, weights, n);
  const auto pos = positions(nds, Z);
  const auto& nb = nds.neighborhoods(eps, true).neighbors(n);
  ConflictGraph graph;
  for (Index z : Z) {
    PointSet adj;
    for (Index y : nb[z])
      if (y != z && pos[y] >= 0) adj.push_back(static_cast<Index>(pos[y]));
    graph.adjacency.push_back(std::move(adj));
    graph.weights.push_back(w[z]);
  }
  const auto sel = max_weight_independent(graph, mode);
  for (std::size_t i : sel.chosen) out.chosen.push_back(Z[i]);
  out.chosen = normalized(std::move(out.chosen));
  out.objective = objective_of(out.chosen, w);
  out.certified = sel.certified;
  if (!is_separated(nds, out.chosen, n, eps))
    throw std::logic_error("separation solver returned a non-separated set");
  return out;
}

double Q_n(const Nds& nds, const Potential& f, PointView Z, int n, double eps, const SolveMode& mode) {
  return minimal_spanning(nds, Z, n, eps, mode, &f).objective;
}

double P_n(const Nds& nds, const Potential& f, PointView Z, int n, double eps, const SolveMode& mode) {
  return maximal_separated(nds, Z, n, eps, mode, &f).objective;
}

}  // namespace ndsp

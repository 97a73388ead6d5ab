#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ndsp/nds.hpp"

namespace ndsp {

/// A potential sequence f = (f_k): one finite real array per level.
class Potential {
 public:
  Potential(std::string label, std::vector<std::vector<double>> values);

  /// a on every point of every level of `nds`.
  static Potential constant(const Nds& nds, double a);
  static Potential zero(const Nds& nds) { return constant(nds, 0.0); }
  /// Level k carries the constant per_level[k].
  static Potential level_constants(const Nds& nds, const std::vector<double>& per_level);

  const std::string& label() const noexcept { return label_; }
  Potential with_label(std::string label) const;

  std::size_t levels() const noexcept { return values_.size(); }
  const std::vector<double>& values(std::size_t k) const { return values_.at(k); }
  double at(std::size_t k, Index x) const { return values_[k][x]; }

  /// Throws std::invalid_argument unless every level of `nds` is provided
  /// with the right length.
  void check_compatible(const Nds& nds) const;

  Potential operator+(const Potential& other) const;
  Potential operator-(const Potential& other) const;
  Potential plus_constant(double a) const;
  Potential scaled(double c) const;
  Potential abs() const;

  /// Pointwise f <= g on every shared level.
  bool dominated_by(const Potential& other) const;

 private:
  std::string label_;
  std::vector<std::vector<double>> values_;
};

/// S_{k,n} f(x) = sum_{j<n} f_{k+j}(T_k^j x). n = 0 gives 0.
double birkhoff_sum(const Nds& nds, const Potential& f, std::size_t k, int n, Index x);

/// S_{k,n} f over all of X_k.
std::vector<double> birkhoff_sums(const Nds& nds, const Potential& f, std::size_t k, int n);

/// table[n][x] = S_{k,n} f(x) for n = 0..max_depth(k), built in one pass.
std::vector<std::vector<double>> birkhoff_table(const Nds& nds, const Potential& f,
                                                std::size_t k = 0);

/// sup over levels and points of |f_k(x)|.
double sup_norm(const Potential& f);

/// Same sup restricted to levels [first, last).
double sup_norm_levels(const Potential& f, std::size_t first, std::size_t last);

/// f^[m] on power_system(nds, m): level k value is S_{km,m} f.
Potential power_potential(const Nds& nds, const Potential& f, int m);

/// (f + g)(i, j) = f_k(i) + g_k(j) on the product; levels truncate to the
/// shorter potential.
Potential product_potential(const Potential& f, const Potential& g);

/// (pi* g)_k = g_k o pi_k.
Potential pullback(const std::vector<std::vector<Index>>& pi, const Potential& g);

/// Potential with values c * coordinate on every level that carries
/// coordinates (first symbol on word spaces, position on grids).
Potential first_coordinate_weight(const Nds& nds, double c);

/// amplitude * cos(2 pi * coordinate) + offset on every level.
Potential cosine_of_position(const Nds& nds, double amplitude, double offset = 0.0);

struct EquicontinuityTable {
  /// (delta, omega(delta)) with omega(delta) the largest |f_k(x) - f_k(y)|
  /// over levels and pairs with d_k(x, y) < delta.
  std::vector<std::pair<double, double>> rows;
  /// omega just above zero: the modulus below the smallest positive distance.
  double omega_zero_plus = 0.0;
};

EquicontinuityTable equicontinuity_modulus(const Nds& nds, const Potential& f,
                                           const std::vector<double>& delta_grid);

/// omega(delta) for a single delta.
double modulus_at(const Nds& nds, const Potential& f, double delta);

}  // namespace ndsp

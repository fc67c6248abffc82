#pragma once

#include "specineq/rational.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace specineq {

/// Round unit sphere S^n.
struct Sphere {
  int n = 2;
};

/// Flat torus R^d / (L_1 Z x ... x L_d Z). Side lengths are stored in units of 2*pi,
/// L_j = 2*pi*periods[j], which keeps every eigenvalue sum_j (k_j / periods[j])^2 rational.
struct FlatTorus {
  std::vector<Rational> periods;
};

struct SpectralLevel {
  Rational eigenvalue;
  BigInt multiplicity;
};

/// Exact spectrum of a model space. Levels are produced on demand; nothing is tabulated.
class ModelSpectrum {
 public:
  using Space = std::variant<Sphere, FlatTorus>;

  explicit ModelSpectrum(Space space);

  const Space& space() const { return space_; }

  /// Smallest levels whose multiplicities add up to at least `count` eigenvalues.
  std::vector<SpectralLevel> levels(std::size_t count) const;

  /// First `count` eigenvalues, repeated according to multiplicity.
  std::vector<Rational> prefix(std::size_t count) const;

 private:
  Space space_;
};

Rational sphere_eigenvalue(int n, int level);
BigInt sphere_multiplicity(int n, int level);

/// Closed form ((n+2m)/n) * C(n+m-1, m); cross-checked against the cumulative multiplicity sum.
BigInt gap_index(int n, int m);

/// sum_{l=0}^{m} mu(n, l).
BigInt cumulative_multiplicity(int n, int m);

std::vector<Rational> spectrum_prefix(const ModelSpectrum& spectrum, std::size_t count);

/// Both sides of the Yang-type inequality n sum (L - l_i)^2 <= 4 sum (L - l_i)(l_i + d_i)
/// for S^n at the gap index k = gap_index(n, m), potential q = g|h|^2 = g n^2.
struct SaturationSides {
  std::size_t k = 0;
  Rational lhs;
  Rational rhs;
};

SaturationSides sphere_saturation_sides(int n, int m, const Rational& g);

/// rhs - lhs of sphere_saturation_sides; identically zero.
Rational verify_sphere_saturation(int n, int m, const Rational& g);

/// Contribution of level l (0 <= l <= m) to (n-1)! * (rhs - lhs) at the gap index of level m:
///   (m-l+1)(n+m+l)(4l(l-1) - n^2(m-l) - n(m^2+m-l(l+3))) * mu(n,l) * (n-1)!
/// where mu(n,l)(n-1)! = (2l+n-1)(n+l-2)!/l! for all cases except n = 1, l = 0.
/// The sum over l = 0..m vanishes; the l = 0 term is the constant eigenfunction.
Rational saturation_summand(int n, int m, int level);

}  // namespace specineq

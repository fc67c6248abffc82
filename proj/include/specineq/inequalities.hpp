#pragma once

// Universal eigenvalue inequalities evaluated on a finite spectrum.
//
// Every routine is templated on the scalar so the same code runs on floating-point
// spectra (meshes, grids) and on exact rational spectra (model spaces), where a
// saturated inequality must come out as an exact zero.

#include "specineq/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specineq {

/// Missing or inconsistent input data for an inequality.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }
inline double abs_value(double x) { return std::abs(x); }
inline Rational abs_value(const Rational& x) { return abs(x); }

enum class AmbientKind {
  Euclidean,
  Sphere,
  ProjectiveR,
  ProjectiveC,
  ProjectiveQ,
  ProjectiveCOddDim,       // odd-dimensional submanifold of CP^m
  ProjectiveCTotallyReal,  // totally real submanifold of CP^m
};

/// Space the submanifold sits in. The correction constant c(n) enters through
/// delta_bar_i = delta_i + c(n)/4, with delta_i computed from the Euclidean formula.
struct AmbientContext {
  AmbientKind kind = AmbientKind::Euclidean;

  /// c(n); integral in every case (2n(n + 2 - 1/n) = 2n^2 + 4n - 2).
  long c_value(int n) const {
    switch (kind) {
      case AmbientKind::Euclidean: return 0;
      case AmbientKind::Sphere: return static_cast<long>(n) * n;
      case AmbientKind::ProjectiveR: return 2L * n * (n + 1);
      case AmbientKind::ProjectiveC: return 2L * n * (n + 2);
      case AmbientKind::ProjectiveQ: return 2L * n * (n + 4);
      case AmbientKind::ProjectiveCOddDim: return 2L * n * n + 4L * n - 2;
      case AmbientKind::ProjectiveCTotallyReal: return 2L * n * (n + 1);
    }
    return 0;
  }
};

std::string to_string(AmbientKind kind);
AmbientKind parse_ambient(const std::string& name);

template <class Scalar>
struct SpectrumSample {
  int n = 2;                                       ///< intrinsic dimension
  std::vector<Scalar> eigenvalues;                 ///< nondecreasing lambda_1..lambda_N
  std::optional<std::vector<Scalar>> delta_terms;  ///< int (|h|^2/4 - q) u_i^2
  std::optional<Scalar> delta_sup;                 ///< sup (|h|^2/4 - q)
  std::optional<std::vector<Scalar>> q_integrals;  ///< int q u_i^2 (eigenmap inequality)
  AmbientContext ambient;

  std::size_t size() const { return eigenvalues.size(); }
};

template <class Scalar>
struct Sides {
  Scalar lhs{};
  Scalar rhs{};
  Scalar margin() const { return rhs - lhs; }
};

/// Root bracket of a quadratic inequality in lambda_{k+1}. `discriminant` is the reduced
/// discriminant (b/2a)^2 - c/a, so the roots are centre -/+ sqrt(discriminant).
struct BoundResult {
  std::size_t k = 0;
  double lower = 0;
  double upper = 0;
  double discriminant = 0;
  bool valid = true;
};

namespace detail {

template <class Scalar>
void require_k(const SpectrumSample<Scalar>& s, std::size_t k) {
  if (k < 1) throw std::domain_error("k must be >= 1");
  if (k + 1 > s.size())
    throw std::domain_error("k = " + std::to_string(k) + " needs " + std::to_string(k + 1) +
                            " eigenvalues, sample has " + std::to_string(s.size()));
}

template <class Scalar>
Scalar delta_bar(const SpectrumSample<Scalar>& s, std::size_t i) {
  if (!s.delta_terms) throw ConfigError("inequality needs per-eigenfunction delta terms");
  if (i >= s.delta_terms->size()) throw ConfigError("delta terms shorter than the requested k");
  return (*s.delta_terms)[i] + Scalar(s.ambient.c_value(s.n)) / Scalar(4);
}

template <class Scalar>
Scalar delta_sup_bar(const SpectrumSample<Scalar>& s) {
  Scalar sup;
  if (s.delta_sup) {
    sup = *s.delta_sup;
  } else if (s.delta_terms && !s.delta_terms->empty()) {
    sup = *std::max_element(s.delta_terms->begin(), s.delta_terms->end());
  } else {
    throw ConfigError("bound needs delta_sup or delta terms");
  }
  return sup + Scalar(s.ambient.c_value(s.n)) / Scalar(4);
}

// Roots of a*x^2 - b*x + c <= 0, a > 0.
template <class Scalar>
BoundResult quadratic_roots(std::size_t k, const Scalar& a, const Scalar& b, const Scalar& c, double tol) {
  const Scalar centre = b / (Scalar(2) * a);
  const Scalar disc = centre * centre - c / a;
  BoundResult r;
  r.k = k;
  r.discriminant = to_double(disc);
  const double scale = std::max(1.0, to_double(centre) * to_double(centre));
  r.valid = r.discriminant >= -tol * scale;
  const double root = std::sqrt(std::max(0.0, r.discriminant));
  r.lower = to_double(centre) - root;
  r.upper = to_double(centre) + root;
  return r;
}

}  // namespace detail

/// Both sides of n sum_{i<=k} (l_{k+1} - l_i)^2 <= 4 sum_{i<=k} (l_{k+1} - l_i)(l_i + delta_i).
template <class Scalar>
Sides<Scalar> yang_sides(const SpectrumSample<Scalar>& s, std::size_t k) {
  detail::require_k(s, k);
  const Scalar& top = s.eigenvalues[k];
  Sides<Scalar> out;
  for (std::size_t i = 0; i < k; ++i) {
    const Scalar gap = top - s.eigenvalues[i];
    out.lhs += Scalar(s.n) * gap * gap;
    out.rhs += Scalar(4) * gap * (s.eigenvalues[i] + detail::delta_bar(s, i));
  }
  return out;
}

template <class Scalar>
Scalar yang_margin(const SpectrumSample<Scalar>& s, std::size_t k) {
  return yang_sides(s, k).margin();
}

/// Roots of k x^2 - x((2 + 4/n) sum l_i + (4/n) sum d_i) + (1 + 4/n) sum l_i^2 + (4/n) sum l_i d_i.
template <class Scalar>
BoundResult quadratic_bounds(const SpectrumSample<Scalar>& s, std::size_t k, double tol = 0.0) {
  detail::require_k(s, k);
  const Scalar n(s.n);
  Scalar sum_l{}, sum_d{}, sum_l2{}, sum_ld{};
  for (std::size_t i = 0; i < k; ++i) {
    const Scalar& l = s.eigenvalues[i];
    const Scalar d = detail::delta_bar(s, i);
    sum_l += l;
    sum_d += d;
    sum_l2 += l * l;
    sum_ld += l * d;
  }
  const Scalar b = (Scalar(2) + Scalar(4) / n) * sum_l + Scalar(4) / n * sum_d;
  const Scalar c = (Scalar(1) + Scalar(4) / n) * sum_l2 + Scalar(4) / n * sum_ld;
  return detail::quadratic_roots(k, Scalar(static_cast<long>(k)), b, c, tol);
}

/// lambda_{k+1} <= (1 + 4/n)(1/k) sum l_i + 4 delta / n, delta = sup(|h|^2/4 - q) (+ c(n)/4).
template <class Scalar>
Scalar simple_upper_bound(const SpectrumSample<Scalar>& s, std::size_t k) {
  detail::require_k(s, k);
  const Scalar n(s.n);
  Scalar sum_l{};
  for (std::size_t i = 0; i < k; ++i) sum_l += s.eigenvalues[i];
  return (Scalar(1) + Scalar(4) / n) * sum_l / Scalar(static_cast<long>(k)) +
         Scalar(4) * detail::delta_sup_bar(s) / n;
}

/// n lambda_{k+1} - ((n + 4)/k) sum_{i<=k} lambda_i: a lower bound for ||h||_inf^2.
template <class Scalar>
Scalar immersibility_term(const SpectrumSample<Scalar>& s, std::size_t k) {
  detail::require_k(s, k);
  const Scalar n(s.n);
  Scalar sum_l{};
  for (std::size_t i = 0; i < k; ++i) sum_l += s.eigenvalues[i];
  return n * s.eigenvalues[k] - (n + Scalar(4)) * sum_l / Scalar(static_cast<long>(k));
}

/// Strongest obstruction over 1 <= k <= k_max.
template <class Scalar>
Scalar immersibility_bound(const SpectrumSample<Scalar>& s, std::size_t k_max) {
  if (k_max < 1) throw std::domain_error("k_max must be >= 1");
  Scalar best = immersibility_term(s, 1);
  for (std::size_t k = 2; k <= k_max; ++k) best = std::max<Scalar>(best, immersibility_term(s, k));
  return best;
}

/// lambda_2 <= (1/(nV)) int |h|^2 for closed submanifolds with q = 0.
template <class Scalar>
Scalar reilly_lambda2(int n, const Scalar& mean_h_sq) {
  if (n < 1) throw std::domain_error("dimension must be >= 1");
  return mean_h_sq / Scalar(n);
}

/// C_R(n, k) = ((4/n + 1)^{k-1} - 1) / 4.
template <class Scalar>
Scalar reilly_constant(int n, std::size_t k) {
  if (k < 2) throw std::domain_error("Reilly constant needs k >= 2");
  const Scalar ratio = Scalar(4) / Scalar(n) + Scalar(1);
  Scalar power(1);
  for (std::size_t j = 1; j < k; ++j) power *= ratio;
  return (power - Scalar(1)) / Scalar(4);
}

/// lambda_k <= (4/n + 1)^{k-1} lambda_1 + C_R(n, k) ||h||_inf^2.
template <class Scalar>
Scalar reilly_chain(int n, std::size_t k, const Scalar& lambda1, const Scalar& h_sup_sq) {
  if (k < 2) throw std::domain_error("Reilly chain bound needs k >= 2");
  const Scalar ratio = Scalar(4) / Scalar(n) + Scalar(1);
  Scalar power(1);
  for (std::size_t j = 1; j < k; ++j) power *= ratio;
  return power * lambda1 + reilly_constant<Scalar>(n, k) * h_sup_sq;
}

namespace detail {

template <class Scalar>
const std::vector<Scalar>& q_integrals(const SpectrumSample<Scalar>& s, std::size_t k) {
  if (!s.q_integrals) throw ConfigError("eigenmap inequality needs the potential moments int q u_i^2");
  if (s.q_integrals->size() < k) throw ConfigError("potential moments shorter than the requested k");
  return *s.q_integrals;
}

}  // namespace detail

/// sum (l_{k+1} - l_i)^2 <= sum (l_{k+1} - l_i)(lambda_map + 4(l_i - int q u_i^2)).
template <class Scalar>
Sides<Scalar> eigenmap_sides(const Scalar& lambda_map, const SpectrumSample<Scalar>& s, std::size_t k) {
  detail::require_k(s, k);
  if (!(lambda_map > Scalar(0))) throw std::domain_error("eigenmap eigenvalue must be positive");
  const auto& q = detail::q_integrals(s, k);
  const Scalar& top = s.eigenvalues[k];
  Sides<Scalar> out;
  for (std::size_t i = 0; i < k; ++i) {
    const Scalar gap = top - s.eigenvalues[i];
    out.lhs += gap * gap;
    out.rhs += gap * (lambda_map + Scalar(4) * (s.eigenvalues[i] - q[i]));
  }
  return out;
}

template <class Scalar>
Scalar eigenmap_margin(const Scalar& lambda_map, const SpectrumSample<Scalar>& s, std::size_t k) {
  return eigenmap_sides(lambda_map, s, k).margin();
}

/// Root bracket of the quadratic in lambda_{k+1} equivalent to the eigenmap inequality:
///   k x^2 - x(6 sum l_i + k lambda_map - 4 sum q_i) + 5 sum l_i^2 + lambda_map sum l_i - 4 sum l_i q_i <= 0.
template <class Scalar>
BoundResult eigenmap_quadratic_bounds(const Scalar& lambda_map, const SpectrumSample<Scalar>& s, std::size_t k,
                                      double tol = 0.0) {
  detail::require_k(s, k);
  if (!(lambda_map > Scalar(0))) throw std::domain_error("eigenmap eigenvalue must be positive");
  const auto& q = detail::q_integrals(s, k);
  const Scalar kk(static_cast<long>(k));
  Scalar sum_l{}, sum_q{}, sum_l2{}, sum_lq{};
  for (std::size_t i = 0; i < k; ++i) {
    const Scalar& l = s.eigenvalues[i];
    sum_l += l;
    sum_q += q[i];
    sum_l2 += l * l;
    sum_lq += l * q[i];
  }
  const Scalar b = Scalar(6) * sum_l + kk * lambda_map - Scalar(4) * sum_q;
  const Scalar c = Scalar(5) * sum_l2 + lambda_map * sum_l - Scalar(4) * sum_lq;
  return detail::quadratic_roots(k, kk, b, c, tol);
}

template <class Scalar>
double eigenmap_quadratic_upper(const Scalar& lambda_map, const SpectrumSample<Scalar>& s, std::size_t k) {
  return eigenmap_quadratic_bounds(lambda_map, s, k).upper;
}

namespace detail {

template <class Scalar>
void require_kohn(int n, const std::vector<Scalar>& lambdas, std::size_t k) {
  if (n < 1) throw std::domain_error("Heisenberg parameter n must be >= 1");
  if (k < 1 || k + 1 > lambdas.size()) throw std::domain_error("k out of range for the supplied eigenvalues");
  if (!(lambdas.front() > Scalar(0))) throw std::domain_error("Dirichlet Kohn spectrum must start above zero");
}

}  // namespace detail

/// n sum (l_{k+1} - l_i)^2 <= 2 sum (l_{k+1} - l_i) l_i on Heisenberg domains.
template <class Scalar>
Sides<Scalar> kohn_sides(int n, const std::vector<Scalar>& lambdas, std::size_t k) {
  detail::require_kohn(n, lambdas, k);
  const Scalar& top = lambdas[k];
  Sides<Scalar> out;
  for (std::size_t i = 0; i < k; ++i) {
    const Scalar gap = top - lambdas[i];
    out.lhs += Scalar(n) * gap * gap;
    out.rhs += Scalar(2) * gap * lambdas[i];
  }
  return out;
}

template <class Scalar>
Scalar kohn_margin(int n, const std::vector<Scalar>& lambdas, std::size_t k) {
  return kohn_sides(n, lambdas, k).margin();
}

struct KohnBounds {
  BoundResult bound;   ///< (n+1)/(nk) sum l_i -/+ sqrt(D~)
  double simple = 0;   ///< (1 + 2/n)(1/k) sum l_i
};

template <class Scalar>
KohnBounds kohn_bounds(int n, const std::vector<Scalar>& lambdas, std::size_t k, double tol = 0.0) {
  detail::require_kohn(n, lambdas, k);
  const Scalar nn(n);
  const Scalar kk(static_cast<long>(k));
  Scalar sum_l{}, sum_l2{};
  for (std::size_t i = 0; i < k; ++i) {
    sum_l += lambdas[i];
    sum_l2 += lambdas[i] * lambdas[i];
  }
  // n k x^2 - 2(n+1) x sum l + (n+2) sum l^2 <= 0
  KohnBounds out;
  out.bound = detail::quadratic_roots<Scalar>(k, nn * kk, Scalar(2) * (nn + Scalar(1)) * sum_l, (nn + Scalar(2)) * sum_l2,
                                             tol);
  out.simple = to_double((Scalar(1) + Scalar(2) / nn) * sum_l / kk);
  return out;
}

}  // namespace specineq

#include "specineq/exact_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace specineq {

BigInt binomial(long a, long b) {
  if (a < 0 || b < 0 || a < b) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return r;
}

BigInt factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of a negative integer");
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    // decimal literal: exact, e.g. "0.25" -> 1/4
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t scale = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("malformed rational literal '" + text + "'");
    if (digits.front() == '+') digits.erase(0, 1);
    BigInt num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("malformed rational literal '" + text + "'");
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  std::string t = text;
  if (t.front() == '+') t.erase(0, 1);
  Rational r;
  if (r.set_str(t, 10) != 0 || r.get_den() == 0)
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  r.canonicalize();
  return r;
}

namespace {

void check_sphere_args(int n, int level) {
  if (n < 1) throw std::domain_error("sphere dimension must be >= 1, got " + std::to_string(n));
  if (level < 0) throw std::domain_error("sphere level must be >= 0, got " + std::to_string(level));
}

std::vector<SpectralLevel> sphere_levels(int n, std::size_t count) {
  std::vector<SpectralLevel> out;
  BigInt total = 0;
  for (int l = 0; total < static_cast<unsigned long>(count); ++l) {
    out.push_back({sphere_eigenvalue(n, l), sphere_multiplicity(n, l)});
    total += out.back().multiplicity;
  }
  return out;
}

// All lattice eigenvalues sum_j (k_j / p_j)^2 not exceeding `radius`, grouped by value.
std::map<Rational, BigInt> torus_ball(const FlatTorus& torus, const Rational& radius) {
  const std::size_t d = torus.periods.size();
  std::vector<long> bound(d);
  const double r = std::sqrt(radius.get_d());
  for (std::size_t j = 0; j < d; ++j) bound[j] = static_cast<long>(std::floor(torus.periods[j].get_d() * r)) + 1;

  std::vector<Rational> inv_sq(d);
  for (std::size_t j = 0; j < d; ++j) inv_sq[j] = 1 / (torus.periods[j] * torus.periods[j]);

  std::map<Rational, BigInt> counts;
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t axis, const Rational& partial) {
    if (partial > radius) return;
    if (axis == d) {
      counts[partial] += 1;
      return;
    }
    for (long k = -bound[axis]; k <= bound[axis]; ++k) walk(axis + 1, partial + inv_sq[axis] * (k * k));
  };
  walk(0, Rational(0));
  return counts;
}

std::vector<SpectralLevel> torus_levels(const FlatTorus& torus, std::size_t count) {
  Rational radius = std::max<std::size_t>(count, 4);
  for (;;) {
    const auto ball = torus_ball(torus, radius);
    const Rational half = radius / 2;
    std::vector<SpectralLevel> out;
    BigInt total = 0;
    for (const auto& [value, mult] : ball) {
      if (value > half || total >= static_cast<unsigned long>(count)) break;
      out.push_back({value, mult});
      total += mult;
    }
    if (total >= static_cast<unsigned long>(count)) return out;
    radius *= 2;
  }
}

}  // namespace

ModelSpectrum::ModelSpectrum(Space space) : space_(std::move(space)) {
  if (const auto* s = std::get_if<Sphere>(&space_)) {
    check_sphere_args(s->n, 0);
  } else {
    const auto& t = std::get<FlatTorus>(space_);
    if (t.periods.empty()) throw std::domain_error("flat torus needs at least one side length");
    for (const auto& p : t.periods)
      if (p <= 0) throw std::domain_error("flat torus side lengths must be positive");
  }
}

std::vector<SpectralLevel> ModelSpectrum::levels(std::size_t count) const {
  if (const auto* s = std::get_if<Sphere>(&space_)) return sphere_levels(s->n, count);
  return torus_levels(std::get<FlatTorus>(space_), count);
}

std::vector<Rational> ModelSpectrum::prefix(std::size_t count) const {
  std::vector<Rational> out;
  out.reserve(count);
  for (const auto& level : levels(count)) {
    for (BigInt i = 0; i < level.multiplicity && out.size() < count; ++i) out.push_back(level.eigenvalue);
  }
  return out;
}

Rational sphere_eigenvalue(int n, int level) {
  check_sphere_args(n, level);
  return Rational(static_cast<long>(level) * (level + n - 1));
}

BigInt sphere_multiplicity(int n, int level) {
  check_sphere_args(n, level);
  return binomial(n + level, n) - binomial(n + level - 2, n);
}

BigInt gap_index(int n, int m) {
  if (n < 1 || m < 0) throw std::domain_error("gap_index requires n >= 1 and m >= 0");
  const BigInt num = BigInt(n + 2 * m) * binomial(n + m - 1, m);
  if (num % n != 0) throw std::logic_error("gap index closed form is not integral");
  return num / n;
}

BigInt cumulative_multiplicity(int n, int m) {
  if (n < 1 || m < 0) throw std::domain_error("cumulative_multiplicity requires n >= 1 and m >= 0");
  BigInt total = 0;
  for (int l = 0; l <= m; ++l) total += sphere_multiplicity(n, l);
  return total;
}

std::vector<Rational> spectrum_prefix(const ModelSpectrum& spectrum, std::size_t count) {
  return spectrum.prefix(count);
}

SaturationSides sphere_saturation_sides(int n, int m, const Rational& g) {
  if (n < 1 || m < 1) throw std::domain_error("sphere saturation requires n >= 1 and m >= 1");
  const BigInt k_big = gap_index(n, m);
  if (k_big != cumulative_multiplicity(n, m)) throw std::logic_error("gap index closed form disagrees with multiplicity sum");
  const auto k = static_cast<std::size_t>(k_big.get_ui());

  // Spectrum of -Delta + g|h|^2 on S^n, where |h|^2 = n^2, and delta_i = n^2/4 - g n^2.
  const Rational shift = g * n * n;
  const Rational delta = ratio(n * n, 4) - shift;
  const auto lambda = ModelSpectrum(Sphere{n}).prefix(k + 1);

  SaturationSides sides;
  sides.k = k;
  const Rational top = lambda[k] + shift;
  for (std::size_t i = 0; i < k; ++i) {
    const Rational gap = top - (lambda[i] + shift);
    sides.lhs += n * gap * gap;
    sides.rhs += 4 * gap * (lambda[i] + shift + delta);
  }
  return sides;
}

Rational verify_sphere_saturation(int n, int m, const Rational& g) {
  const auto sides = sphere_saturation_sides(n, m, g);
  return sides.rhs - sides.lhs;
}

Rational saturation_summand(int n, int m, int level) {
  if (n < 1 || m < 1 || level < 0 || level > m)
    throw std::domain_error("saturation_summand requires n >= 1, m >= 1, 0 <= l <= m");
  const long l = level;
  const BigInt bracket = BigInt(4 * l * (l - 1)) - BigInt(static_cast<long>(n) * n * (m - l)) -
                         BigInt(static_cast<long>(n) * (static_cast<long>(m) * m + m - l * (l + 3)));
  const BigInt weight = sphere_multiplicity(n, level) * factorial(n - 1);
  return Rational(BigInt(m - l + 1) * BigInt(n + m + l) * bracket * weight);
}

}  // namespace specineq

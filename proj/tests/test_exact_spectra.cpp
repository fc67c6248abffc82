#include "specineq/exact_spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace specineq;

namespace {

// number of monomials of degree d in v variables, by enumeration
long count_monomials(int v, int d) {
  long count = 0;
  std::function<void(int, int)> walk = [&](int var, int left) {
    if (var == v - 1) {
      ++count;
      return;
    }
    for (int e = 0; e <= left; ++e) walk(var + 1, left - e);
  };
  if (d < 0) return 0;
  walk(0, d);
  return count;
}

// harmonic polynomials of degree l in n+1 variables: P_l minus |x|^2 P_{l-2}
long brute_multiplicity(int n, int l) { return count_monomials(n + 1, l) - count_monomials(n + 1, l - 2); }

std::vector<Rational> brute_torus(const std::vector<Rational>& periods, int box, std::size_t count) {
  std::vector<Rational> all;
  const int d = static_cast<int>(periods.size());
  std::vector<int> k(static_cast<std::size_t>(d), -box);
  while (true) {
    Rational e(0);
    for (int j = 0; j < d; ++j) {
      const Rational c = Rational(k[static_cast<std::size_t>(j)]) / periods[static_cast<std::size_t>(j)];
      e += c * c;
    }
    all.push_back(e);
    int j = 0;
    while (j < d && ++k[static_cast<std::size_t>(j)] > box) k[static_cast<std::size_t>(j++)] = -box;
    if (j == d) break;
  }
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

}  // namespace

TEST_CASE("sphere multiplicities match monomial counting") {
  for (int n = 1; n <= 6; ++n)
    for (int l = 0; l <= 8; ++l) {
      CAPTURE(n);
      CAPTURE(l);
      CHECK(sphere_multiplicity(n, l) == brute_multiplicity(n, l));
    }
}

TEST_CASE("sphere eigenvalues") {
  CHECK(sphere_eigenvalue(2, 3) == 12);
  CHECK(sphere_eigenvalue(5, 2) == 12);
  const auto p = ModelSpectrum(Sphere{2}).prefix(10);
  const std::vector<Rational> expected = {0, 2, 2, 2, 6, 6, 6, 6, 6, 12};
  CHECK(p == expected);
  CHECK_THROWS_AS(sphere_eigenvalue(0, 1), std::domain_error);
  CHECK_THROWS_AS(sphere_multiplicity(2, -1), std::domain_error);
}

TEST_CASE("gap index closed form equals cumulative multiplicity") {
  for (int n = 1; n <= 8; ++n)
    for (int m = 0; m <= 12; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      CHECK(gap_index(n, m) == cumulative_multiplicity(n, m));
    }
  CHECK(gap_index(2, 1) == 4);
  CHECK(gap_index(2, 2) == 9);
}

TEST_CASE("torus spectrum matches lattice enumeration") {
  const std::vector<std::vector<Rational>> cases = {
      {1, 1}, {1, 2}, {ratio(1, 2), 1, 1}, {ratio(3, 2)}, {1, ratio(1, 3)}};
  for (const auto& periods : cases) {
    const auto fast = ModelSpectrum(FlatTorus{periods}).prefix(60);
    CHECK(fast == brute_torus(periods, periods.size() == 1 ? 40 : 14, 60));
  }
}

TEST_CASE("torus levels aggregate multiplicities") {
  const auto levels = ModelSpectrum(FlatTorus{{1, 1}}).levels(9);
  REQUIRE(levels.size() >= 3);
  CHECK(levels[0].eigenvalue == 0);
  CHECK(levels[0].multiplicity == 1);
  CHECK(levels[1].eigenvalue == 1);
  CHECK(levels[1].multiplicity == 4);
  CHECK(levels[2].eigenvalue == 2);
  CHECK(levels[2].multiplicity == 4);
}

TEST_CASE("S^2 at k = 4 saturates with both sides 168") {
  // summation oracle: eigenvalues 0, 2, 2, 2 below lambda_5 = 6, delta_i = n^2/4 = 1
  const std::vector<Rational> lam = {0, 2, 2, 2};
  Rational lhs(0), rhs(0);
  for (const auto& l : lam) {
    lhs += 2 * (6 - l) * (6 - l);
    rhs += 4 * (6 - l) * (l + 1);
  }
  CHECK(lhs == 168);
  CHECK(rhs == 168);
  const auto sides = sphere_saturation_sides(2, 1, 0);
  CHECK(sides.k == 4);
  CHECK(sides.lhs == lhs);
  CHECK(sides.rhs == rhs);
}

TEST_CASE("sphere saturation is an exact identity") {
  const std::vector<Rational> gs = {0, ratio(1, 4), -3, ratio(17, 5)};
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 8; ++m)
      for (const auto& g : gs) CHECK(verify_sphere_saturation(n, m, g) == 0);
}

TEST_CASE("saturation summands cancel including the constant level") {
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 8; ++m) {
      Rational total(0);
      for (int l = 0; l <= m; ++l) total += saturation_summand(n, m, l);
      CHECK(total == 0);
      // dropping the constant level leaves a nonzero remainder
      CHECK(total - saturation_summand(n, m, 0) != 0);
    }
  CHECK(saturation_summand(2, 3, 0) == -720);
  CHECK_THROWS_AS(saturation_summand(2, 3, 4), std::domain_error);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("17/5") == ratio(17, 5));
  CHECK(parse_rational("-3") == -3);
  CHECK(parse_rational("0.25") == ratio(1, 4));
  CHECK(parse_rational("6/4") == ratio(3, 2));
  CHECK(ratio(2480, 24) == ratio(310, 3));
  CHECK(ratio(6, -4).get_den() == 2);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}

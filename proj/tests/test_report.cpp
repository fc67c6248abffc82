#include "specineq/exact_spectra.hpp"
#include "specineq/report.hpp"

#include <doctest.h>

#include <sstream>

using namespace specineq;

namespace {

ReportInputs<Rational> sphere_inputs(int n, std::size_t count) {
  ReportInputs<Rational> in;
  in.label = "S^" + std::to_string(n);
  in.sample.n = n;
  in.sample.eigenvalues = ModelSpectrum(Sphere{n}).prefix(count);
  in.sample.delta_terms = std::vector<Rational>(count, ratio(n * n, 4));
  in.sample.delta_sup = ratio(n * n, 4);
  in.h_sup_sq = Rational(n * n);
  in.mean_h_sq = Rational(n * n);
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("theorem tags round trip") {
  for (Theorem t : all_theorems()) CHECK(parse_theorem(tag(t)) == t);
  CHECK(all_theorems().size() == 12);
  CHECK_THROWS_AS(parse_theorem("weyl"), ConfigError);
}

TEST_CASE("exact sphere report: zero margins, ascending k, exact text") {
  const auto rep = build_report(Theorem::Yang, sphere_inputs(2, 10), 1, 9, 0.0);
  CHECK(rep.exact);
  REQUIRE(rep.rows.size() == 9);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].k == i + 1);
    CHECK(rep.rows[i].margin == 0.0);
    CHECK(rep.rows[i].exact_margin == "0");
    CHECK(rep.rows[i].satisfied);
  }
  CHECK(rep.row(4).exact_lhs == "168");
}

TEST_CASE("saturated root bounds pass the exact sign test") {
  const auto rep = build_report(Theorem::YangBounds, sphere_inputs(3, 12), 1, 10, 0.0);
  CHECK(rep.all_satisfied());
  // S^3, k = 1: lambda_2 = 3 is the upper root
  CHECK(rep.row(1).upper.value() == doctest::Approx(3.0));
  CHECK(rep.row(1).lambda_next.value() == 3.0);
}

TEST_CASE("floating verdicts use the relative tolerance") {
  ReportInputs<double> in;
  in.sample.n = 2;
  in.sample.eigenvalues = {0.0, 2.0 * (1 + 1e-4), 2.0, 2.0, 6.0};
  in.sample.delta_terms = std::vector<double>(5, 1.0);
  CHECK(build_report(Theorem::Yang, in, 1, 1, 1e-3).rows[0].satisfied);
  CHECK_FALSE(build_report(Theorem::Yang, in, 1, 1, 1e-6).rows[0].satisfied);
  CHECK_FALSE(build_report(Theorem::Yang, in, 1, 1, 0.0).rows[0].satisfied);
}

TEST_CASE("theorem-specific rows") {
  auto in = sphere_inputs(2, 10);
  const auto reilly = build_report(Theorem::Reilly, in, 1, 9, 0.0);
  REQUIRE(reilly.rows.size() == 1);
  CHECK(reilly.rows[0].margin == 0.0);

  const auto chain = build_report(Theorem::ReillyChain, in, 2, 10, 0.0);
  CHECK(chain.rows.front().k == 2);
  CHECK(chain.rows.front().rhs == 2.0);
  CHECK(chain.all_satisfied());

  const auto imm = build_report(Theorem::Immersibility, in, 1, 9, 0.0);
  CHECK(imm.row(1).lhs == 4.0);
  CHECK(imm.row(1).rhs == 4.0);

  CHECK_THROWS_AS(build_report(Theorem::Eigenmap, in, 1, 3, 0.0), ConfigError);
  in.h_sup_sq.reset();
  CHECK_THROWS_AS(build_report(Theorem::Immersibility, in, 1, 3, 0.0), ConfigError);
  CHECK_THROWS_AS(build_report(Theorem::Yang, in, 3, 2, 0.0), std::domain_error);
}

TEST_CASE("Kohn rows") {
  ReportInputs<double> in;
  in.sample.n = 1;
  in.sample.eigenvalues = {1.0, 1.9, 2.5, 3.1, 3.3};
  const auto simple = build_report(Theorem::KohnSimpleBound, in, 1, 4, 1e-3);
  const auto root = build_report(Theorem::KohnBound, in, 1, 4, 1e-3);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(root.row(k).upper.value() <= simple.row(k).rhs);
}

TEST_CASE("saturation report") {
  const auto rep = saturation_report(3, ratio(17, 5), 8);
  REQUIRE(rep.rows.size() == 8);
  CHECK(rep.all_satisfied());
  for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].k > rep.rows[i - 1].k);
  for (const auto& r : rep.rows) CHECK(r.exact_margin == "0");
}

TEST_CASE("csv layout") {
  std::vector<InequalityReport> reps = {build_report(Theorem::YangBounds, sphere_inputs(2, 6), 1, 5, 0.0),
                                        build_report(Theorem::SimpleBound, sphere_inputs(2, 6), 1, 5, 0.0)};
  const std::string csv = to_csv(reps);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theorem,k,lhs,rhs,margin,lower,upper,discriminant,satisfied");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    CHECK(cells.size() == 9);
    CHECK(cells[0].rfind("yang-bounds@S^2", 0) + cells[0].rfind("simple-bound@S^2", 0) != 2 * std::string::npos);
    ++rows;
  }
  CHECK(rows == 10);
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("json and plot data") {
  const auto rep = build_report(Theorem::YangBounds, sphere_inputs(2, 6), 1, 5, 0.0);
  const auto j = to_json(rep);
  CHECK(j["theorem"] == "yang-bounds");
  CHECK(j["rows"].size() == 5);
  CHECK(j["rows"][0]["k"] == 1);
  CHECK(j["all_satisfied"] == true);

  const std::string margins = margin_plot_data(rep);
  CHECK(margins.rfind("# yang-bounds@S^2: k margin\n", 0) == 0);
  const std::string bounds = bound_plot_data(rep);
  std::istringstream in(bounds);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(split(line, ' ').size() == 3);

  const auto imm = build_report(Theorem::Immersibility, sphere_inputs(2, 6), 1, 5, 0.0);
  CHECK(bound_plot_data(imm).empty());
}

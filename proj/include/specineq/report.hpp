#pragma once

#include "specineq/inequalities.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace specineq {

enum class Theorem {
  Yang,             ///< n sum (L - l_i)^2 <= 4 sum (L - l_i)(l_i + delta_i)
  YangBounds,       ///< lambda_{k+1} below the upper root of the Yang quadratic
  SimpleBound,      ///< lambda_{k+1} <= (1 + 4/n) mean(l) + 4 delta / n
  Immersibility,    ///< ||h||_inf^2 >= n lambda_{k+1} - (n + 4) mean(l)
  Reilly,           ///< lambda_2 <= (1/(nV)) int |h|^2
  ReillyChain,      ///< lambda_k <= (4/n + 1)^{k-1} lambda_1 + C_R(n,k) ||h||_inf^2
  Eigenmap,         ///< sum (L - l_i)^2 <= sum (L - l_i)(lambda + 4(l_i - int q u_i^2))
  EigenmapBound,    ///< lambda_{k+1} below the upper root of the eigenmap quadratic
  Kohn,             ///< n sum (L - l_i)^2 <= 2 sum (L - l_i) l_i
  KohnBound,        ///< lambda_{k+1} <= (n+1)/(nk) sum l_i + sqrt(D~)
  KohnSimpleBound,  ///< lambda_{k+1} <= (1 + 2/n)(1/k) sum l_i
  YangSaturation,   ///< exact sphere identity at gap indices
};

std::string tag(Theorem theorem);
Theorem parse_theorem(const std::string& name);
const std::vector<Theorem>& all_theorems();

struct ReportRow {
  std::size_t k = 0;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  ///< rhs - lhs
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> discriminant;
  std::optional<double> lambda_next;  ///< lambda_{k+1} where the row concerns it
  bool satisfied = false;
  std::string exact_lhs;  ///< filled for exact (rational) data
  std::string exact_rhs;
  std::string exact_margin;
};

struct InequalityReport {
  std::string theorem;
  std::string label;   ///< case within a scenario, e.g. "n=3" or "g=1/4"
  std::string source;
  double tolerance = 0;
  bool exact = false;
  std::vector<ReportRow> rows;

  bool all_satisfied() const;
  const ReportRow& row(std::size_t k) const;
};

/// Extra data some inequalities need beyond the spectrum sample.
template <class Scalar>
struct ReportInputs {
  SpectrumSample<Scalar> sample;
  std::optional<Scalar> lambda_map;  ///< eigenmap eigenvalue
  std::optional<Scalar> h_sup_sq;    ///< ||h||_inf^2
  std::optional<Scalar> mean_h_sq;   ///< (1/V) int |h|^2
  std::string source;
  std::string label;
};

namespace detail {

inline bool exact_scalar(double) { return false; }
inline bool exact_scalar(const Rational&) { return true; }
inline std::string exact_text(double) { return {}; }
inline std::string exact_text(const Rational& x) { return x.get_str(); }

// margin >= -tol * max(|lhs|, |rhs|); tol = 0 is an exact sign test.
template <class Scalar>
bool verdict(const Scalar& lhs, const Scalar& rhs, double tol) {
  const Scalar margin = rhs - lhs;
  if (tol == 0.0) return margin >= Scalar(0);
  const double scale = std::max(to_double(abs_value(lhs)), to_double(abs_value(rhs)));
  return to_double(margin) >= -tol * scale;
}

template <class Scalar>
ReportRow sides_row(std::size_t k, const Scalar& lhs, const Scalar& rhs, double tol) {
  ReportRow row;
  row.k = k;
  row.lhs = to_double(lhs);
  row.rhs = to_double(rhs);
  row.margin = to_double(Scalar(rhs - lhs));
  row.satisfied = verdict(lhs, rhs, tol);
  if (exact_scalar(lhs)) {
    row.exact_lhs = exact_text(lhs);
    row.exact_rhs = exact_text(rhs);
    row.exact_margin = exact_text(Scalar(rhs - lhs));
  }
  return row;
}

// Row for "value <= upper root". For exact data the verdict is decided without the square
// root: value <= centre or (value - centre)^2 <= D.
template <class Scalar>
ReportRow root_row(std::size_t k, const Scalar& value, const BoundResult& b, const Scalar& centre,
                   const Scalar& disc, double tol) {
  ReportRow row;
  row.k = k;
  row.lhs = to_double(value);
  row.rhs = b.upper;
  row.margin = b.upper - row.lhs;
  row.lower = b.lower;
  row.upper = b.upper;
  row.discriminant = b.discriminant;
  if (tol == 0.0) {
    const Scalar off = value - centre;
    row.satisfied = disc >= Scalar(0) && (off <= Scalar(0) || off * off <= disc);
  } else {
    row.satisfied = b.valid && row.margin >= -tol * std::max(std::abs(row.lhs), std::abs(row.rhs));
  }
  if (exact_scalar(value)) row.exact_lhs = exact_text(value);
  return row;
}

template <class Scalar>
Scalar mean_of(const std::vector<Scalar>& v, std::size_t k) {
  Scalar s{};
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s / Scalar(static_cast<long>(k));
}

}  // namespace detail

/// Per-k rows for one inequality over k in [k_min, k_max], ascending in k.
/// For ReillyChain, k is the eigenvalue index (k >= 2); elsewhere it is the number of
/// eigenvalues below lambda_{k+1}.
template <class Scalar>
InequalityReport build_report(Theorem theorem, const ReportInputs<Scalar>& in, std::size_t k_min, std::size_t k_max,
                              double tolerance) {
  if (k_min < 1 || k_max < k_min) throw std::domain_error("empty or invalid k range");
  InequalityReport report;
  report.theorem = tag(theorem);
  report.label = in.label;
  report.source = in.source;
  report.tolerance = tolerance;
  report.exact = detail::exact_scalar(Scalar{});
  const auto& s = in.sample;
  const auto& l = s.eigenvalues;

  auto need = [&](const auto& opt, const char* what) -> const Scalar& {
    if (!opt) throw ConfigError(report.theorem + " needs " + what);
    return *opt;
  };

  switch (theorem) {
    case Theorem::Reilly: {
      if (l.size() < 2) throw std::domain_error("Reilly bound needs two eigenvalues");
      const Scalar bound = reilly_lambda2(s.n, need(in.mean_h_sq, "the mean of |h|^2"));
      report.rows.push_back(detail::sides_row<Scalar>(1, l[1], bound, tolerance));
      return report;
    }
    case Theorem::YangSaturation:
      throw ConfigError("yang-saturation rows come from saturation_report");
    default: break;
  }

  for (std::size_t k = k_min; k <= k_max; ++k) {
    switch (theorem) {
      case Theorem::Yang: {
        const auto sides = yang_sides(s, k);
        auto row = detail::sides_row(k, sides.lhs, sides.rhs, tolerance);
        const auto b = quadratic_bounds(s, k);
        row.lower = b.lower;
        row.upper = b.upper;
        row.discriminant = b.discriminant;
        report.rows.push_back(std::move(row));
        break;
      }
      case Theorem::YangBounds: {
        const auto b = quadratic_bounds(s, k, tolerance);
        const Scalar n(s.n);
        Scalar sum_l{}, sum_d{}, sum_l2{}, sum_ld{};
        for (std::size_t i = 0; i < k; ++i) {
          const Scalar d = detail::delta_bar(s, i);
          sum_l += l[i];
          sum_d += d;
          sum_l2 += l[i] * l[i];
          sum_ld += l[i] * d;
        }
        const Scalar kk(static_cast<long>(k));
        const Scalar centre = ((Scalar(1) + Scalar(2) / n) * sum_l + Scalar(2) / n * sum_d) / kk;
        const Scalar disc = centre * centre - ((Scalar(1) + Scalar(4) / n) * sum_l2 + Scalar(4) / n * sum_ld) / kk;
        report.rows.push_back(detail::root_row(k, l[k], b, centre, disc, tolerance));
        break;
      }
      case Theorem::SimpleBound: {
        auto row = detail::sides_row(k, l[k], simple_upper_bound(s, k), tolerance);
        row.upper = row.rhs;
        report.rows.push_back(std::move(row));
        break;
      }
      case Theorem::Immersibility:
        report.rows.push_back(
            detail::sides_row(k, immersibility_term(s, k), need(in.h_sup_sq, "||h||_inf^2"), tolerance));
        break;
      case Theorem::ReillyChain: {
        if (k < 2 || k > l.size()) throw std::domain_error("Reilly chain rows need 2 <= k <= N");
        report.rows.push_back(detail::sides_row(
            k, l[k - 1], reilly_chain(s.n, k, l[0], need(in.h_sup_sq, "||h||_inf^2")), tolerance));
        break;
      }
      case Theorem::Eigenmap: {
        const Scalar& lm = need(in.lambda_map, "an eigenmap eigenvalue");
        const auto sides = eigenmap_sides(lm, s, k);
        auto row = detail::sides_row(k, sides.lhs, sides.rhs, tolerance);
        const auto b = eigenmap_quadratic_bounds(lm, s, k);
        row.lower = b.lower;
        row.upper = b.upper;
        row.discriminant = b.discriminant;
        report.rows.push_back(std::move(row));
        break;
      }
      case Theorem::EigenmapBound: {
        const Scalar& lm = need(in.lambda_map, "an eigenmap eigenvalue");
        const auto b = eigenmap_quadratic_bounds(lm, s, k, tolerance);
        const auto& q = *s.q_integrals;
        const Scalar kk(static_cast<long>(k));
        Scalar sum_l{}, sum_q{}, sum_l2{}, sum_lq{};
        for (std::size_t i = 0; i < k; ++i) {
          sum_l += l[i];
          sum_q += q[i];
          sum_l2 += l[i] * l[i];
          sum_lq += l[i] * q[i];
        }
        const Scalar centre = (Scalar(6) * sum_l + kk * lm - Scalar(4) * sum_q) / (Scalar(2) * kk);
        const Scalar disc = centre * centre - (Scalar(5) * sum_l2 + lm * sum_l - Scalar(4) * sum_lq) / kk;
        report.rows.push_back(detail::root_row(k, l[k], b, centre, disc, tolerance));
        break;
      }
      case Theorem::Kohn: {
        const auto sides = kohn_sides(s.n, l, k);
        auto row = detail::sides_row(k, sides.lhs, sides.rhs, tolerance);
        const auto b = kohn_bounds(s.n, l, k);
        row.lower = b.bound.lower;
        row.upper = b.bound.upper;
        row.discriminant = b.bound.discriminant;
        report.rows.push_back(std::move(row));
        break;
      }
      case Theorem::KohnBound: {
        const auto b = kohn_bounds(s.n, l, k, tolerance);
        const Scalar n(s.n);
        const Scalar mean = detail::mean_of(l, k);
        Scalar mean_sq{};
        for (std::size_t i = 0; i < k; ++i) mean_sq += l[i] * l[i];
        mean_sq /= Scalar(static_cast<long>(k));
        const Scalar centre = (Scalar(1) + Scalar(1) / n) * mean;
        const Scalar disc = centre * centre - (Scalar(1) + Scalar(2) / n) * mean_sq;
        report.rows.push_back(detail::root_row(k, l[k], b.bound, centre, disc, tolerance));
        break;
      }
      case Theorem::KohnSimpleBound: {
        detail::require_kohn(s.n, l, k);
        const Scalar simple = (Scalar(1) + Scalar(2) / Scalar(s.n)) * detail::mean_of(l, k);
        auto row = detail::sides_row(k, l[k], simple, tolerance);
        const auto b = kohn_bounds(s.n, l, k);
        row.upper = b.bound.upper;
        row.lower = b.bound.lower;
        row.discriminant = b.bound.discriminant;
        report.rows.push_back(std::move(row));
        break;
      }
      default: break;
    }
    if (theorem != Theorem::Immersibility && theorem != Theorem::ReillyChain)
      report.rows.back().lambda_next = to_double(l[k]);
  }
  return report;
}

/// Exact sphere identity rows: one row per m in [1, m_max] at k = gap_index(n, m).
InequalityReport saturation_report(int n, const Rational& g, int m_max);

nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const std::vector<InequalityReport>& reports);

/// Flat table with columns theorem,k,lhs,rhs,margin,lower,upper,discriminant,satisfied.
/// The theorem column carries "tag@label" when the report has a label.
std::string to_csv(const std::vector<InequalityReport>& reports);

/// Plain numeric plot data: "k margin" per row.
std::string margin_plot_data(const InequalityReport& report);
/// "k upper lambda_next" for rows carrying both; empty otherwise.
std::string bound_plot_data(const InequalityReport& report);

/// Shortest-round-trip-free fixed formatting used by every serialiser (%.17g).
std::string format_number(double x);

}  // namespace specineq

#include "specineq/report.hpp"

#include "specineq/exact_spectra.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace specineq {

namespace {

struct TheoremName {
  Theorem theorem;
  const char* tag;
};

constexpr TheoremName kNames[] = {
    {Theorem::Yang, "yang"},
    {Theorem::YangBounds, "yang-bounds"},
    {Theorem::SimpleBound, "simple-bound"},
    {Theorem::Immersibility, "immersibility"},
    {Theorem::Reilly, "reilly"},
    {Theorem::ReillyChain, "reilly-chain"},
    {Theorem::Eigenmap, "eigenmap"},
    {Theorem::EigenmapBound, "eigenmap-bound"},
    {Theorem::Kohn, "kohn"},
    {Theorem::KohnBound, "kohn-bound"},
    {Theorem::KohnSimpleBound, "kohn-simple-bound"},
    {Theorem::YangSaturation, "yang-saturation"},
};

void put_optional(nlohmann::json& row, const char* key, const std::optional<double>& x) {
  if (x) row[key] = *x;
}

std::string csv_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

std::string full_tag(const InequalityReport& r) { return r.label.empty() ? r.theorem : r.theorem + "@" + r.label; }

}  // namespace

std::string tag(Theorem theorem) {
  for (const auto& n : kNames)
    if (n.theorem == theorem) return n.tag;
  throw std::logic_error("unnamed theorem");
}

Theorem parse_theorem(const std::string& name) {
  for (const auto& n : kNames)
    if (name == n.tag) return n.theorem;
  throw ConfigError("unknown theorem '" + name + "'");
}

const std::vector<Theorem>& all_theorems() {
  static const std::vector<Theorem> list = [] {
    std::vector<Theorem> out;
    for (const auto& n : kNames) out.push_back(n.theorem);
    return out;
  }();
  return list;
}

bool InequalityReport::all_satisfied() const {
  for (const auto& r : rows)
    if (!r.satisfied) return false;
  return true;
}

const ReportRow& InequalityReport::row(std::size_t k) const {
  for (const auto& r : rows)
    if (r.k == k) return r;
  throw std::out_of_range("report " + theorem + " has no row for k = " + std::to_string(k));
}

InequalityReport saturation_report(int n, const Rational& g, int m_max) {
  if (m_max < 1) throw std::domain_error("m_max must be >= 1");
  InequalityReport report;
  report.theorem = tag(Theorem::YangSaturation);
  report.label = "n=" + std::to_string(n) + ";g=" + g.get_str();
  report.source = "sphere S^" + std::to_string(n);
  report.exact = true;
  for (int m = 1; m <= m_max; ++m) {
    const auto sides = sphere_saturation_sides(n, m, g);
    report.rows.push_back(detail::sides_row(sides.k, sides.lhs, sides.rhs, 0.0));
  }
  return report;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json to_json(const InequalityReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row = {
        {"k", r.k},
        {"lhs", r.lhs},
        {"rhs", r.rhs},
        {"margin", r.margin},
        {"satisfied", r.satisfied},
    };
    put_optional(row, "lower", r.lower);
    put_optional(row, "upper", r.upper);
    put_optional(row, "discriminant", r.discriminant);
    put_optional(row, "lambda_next", r.lambda_next);
    if (!r.exact_lhs.empty()) {
      row["exact"] = {{"lhs", r.exact_lhs}};
      if (!r.exact_rhs.empty()) row["exact"]["rhs"] = r.exact_rhs;
      if (!r.exact_margin.empty()) row["exact"]["margin"] = r.exact_margin;
    }
    rows.push_back(std::move(row));
  }
  return {
      {"theorem", report.theorem},
      {"label", report.label},
      {"source", report.source},
      {"tolerance", report.tolerance},
      {"exact", report.exact},
      {"all_satisfied", report.all_satisfied()},
      {"rows", std::move(rows)},
  };
}

nlohmann::json to_json(const std::vector<InequalityReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

std::string to_csv(const std::vector<InequalityReport>& reports) {
  std::ostringstream out;
  out << "theorem,k,lhs,rhs,margin,lower,upper,discriminant,satisfied\n";
  for (const auto& rep : reports) {
    const std::string name = full_tag(rep);
    for (const auto& r : rep.rows)
      out << name << ',' << r.k << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
          << format_number(r.margin) << ',' << csv_optional(r.lower) << ',' << csv_optional(r.upper) << ','
          << csv_optional(r.discriminant) << ',' << (r.satisfied ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string margin_plot_data(const InequalityReport& report) {
  std::ostringstream out;
  out << "# " << full_tag(report) << ": k margin\n";
  for (const auto& r : report.rows) out << r.k << ' ' << format_number(r.margin) << '\n';
  return out.str();
}

std::string bound_plot_data(const InequalityReport& report) {
  std::ostringstream out;
  bool any = false;
  for (const auto& r : report.rows) {
    if (!r.upper || !r.lambda_next) continue;
    if (!any) out << "# " << full_tag(report) << ": k upper lambda_next\n";
    any = true;
    out << r.k << ' ' << format_number(*r.upper) << ' ' << format_number(*r.lambda_next) << '\n';
  }
  return out.str();
}

}  // namespace specineq

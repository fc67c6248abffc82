#include "specineq/heisenberg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace specineq {

double HeisenbergGrid::spacing(int axis) const {
  const auto a = static_cast<std::size_t>(axis);
  return (upper[a] - lower[a]) / (counts[a] + 1);
}

double HeisenbergGrid::coordinate(int axis, int index) const {
  return lower[static_cast<std::size_t>(axis)] + (index + 1) * spacing(axis);
}

std::size_t HeisenbergGrid::node_count() const {
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  return total;
}

double HeisenbergGrid::cell_volume() const {
  double v = 1;
  for (int a = 0; a < dims(); ++a) v *= spacing(a);
  return v;
}

void validate(const HeisenbergGrid& grid) {
  if (grid.n < 1) throw std::domain_error("Heisenberg parameter n must be >= 1");
  const auto d = static_cast<std::size_t>(grid.dims());
  if (grid.lower.size() != d || grid.upper.size() != d || grid.counts.size() != d)
    throw std::domain_error("Heisenberg grid needs 2n+1 extents and counts");
  for (std::size_t a = 0; a < d; ++a) {
    if (grid.counts[a] < 1) throw std::domain_error("grid axis " + std::to_string(a) + " has an empty interior");
    if (!(grid.upper[a] > grid.lower[a])) throw std::domain_error("grid axis " + std::to_string(a) + " has non-positive extent");
  }
  // centred differences on an odd count have a kernel vector; a product of those is a zero mode of L_h
  if (std::all_of(grid.counts.begin(), grid.counts.end(), [](int c) { return c % 2 == 1; }))
    throw std::domain_error("Heisenberg grid with every axis count odd has a zero mode; make one count even");
}

HeisenbergGrid make_box_grid(int n, double lower, double upper, int count) {
  HeisenbergGrid grid;
  grid.n = n;
  const auto d = static_cast<std::size_t>(2 * n + 1);
  grid.lower.assign(d, lower);
  grid.upper.assign(d, upper);
  grid.counts.assign(d, count);
  validate(grid);
  return grid;
}

KohnOperator assemble_kohn(const HeisenbergGrid& grid, bool freeze_coefficients) {
  validate(grid);
  const int d = grid.dims();
  const int t_axis = 2 * grid.n;
  const auto nodes = static_cast<Eigen::Index>(grid.node_count());

  std::vector<Eigen::Index> stride(static_cast<std::size_t>(d));
  Eigen::Index s = 1;
  for (int a = 0; a < d; ++a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= grid.counts[static_cast<std::size_t>(a)];
  }

  KohnOperator op;
  std::vector<int> index(static_cast<std::size_t>(d));
  // field f < n is X_{f+1}, otherwise Y_{f-n+1}
  for (int f = 0; f < 2 * grid.n; ++f) {
    const bool is_x = f < grid.n;
    const int own_axis = f;                                      // d/dx_i or d/dy_i
    const int coef_axis = is_x ? f + grid.n : f - grid.n;        // y_i for X_i, x_i for Y_i
    const double sign = is_x ? 0.5 : -0.5;
    const double h_own = grid.spacing(own_axis);
    const double h_t = grid.spacing(t_axis);

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(nodes) * 4);
    for (Eigen::Index p = 0; p < nodes; ++p) {
      Eigen::Index rem = p;
      for (int a = 0; a < d; ++a) {
        index[static_cast<std::size_t>(a)] = static_cast<int>(rem % grid.counts[static_cast<std::size_t>(a)]);
        rem /= grid.counts[static_cast<std::size_t>(a)];
      }
      auto push = [&](int axis, double weight) {
        const int i = index[static_cast<std::size_t>(axis)];
        const Eigen::Index st = stride[static_cast<std::size_t>(axis)];
        if (i + 1 < grid.counts[static_cast<std::size_t>(axis)]) entries.emplace_back(p, p + st, weight);
        if (i > 0) entries.emplace_back(p, p - st, -weight);
      };
      push(own_axis, 1.0 / (2.0 * h_own));
      if (!freeze_coefficients) {
        const double coef = sign * grid.coordinate(coef_axis, index[static_cast<std::size_t>(coef_axis)]);
        if (coef != 0.0) push(t_axis, coef / (2.0 * h_t));
      }
    }
    SparseMatrix a(nodes, nodes);
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    op.fields.push_back(std::move(a));
  }

  op.laplacian.resize(nodes, nodes);
  for (const auto& a : op.fields) op.laplacian += SparseMatrix(a.transpose()) * a;
  op.laplacian.makeCompressed();
  return op;
}

std::vector<double> solve_kohn(const HeisenbergGrid& grid, std::size_t k, const SolveConfig& config) {
  if (k < 1 || k >= grid.node_count()) throw std::domain_error("k must satisfy 1 <= k < interior node count");
  const KohnOperator op = assemble_kohn(grid);
  const double vol = grid.cell_volume();
  const SparseMatrix h = vol * op.laplacian;
  const Eigen::VectorXd mass = Eigen::VectorXd::Constant(h.rows(), vol);
  SolveConfig cfg = config;
  cfg.count = k;
  const EigenSolution sol = solve_smallest(h, mass, cfg);
  return {sol.values.data(), sol.values.data() + sol.values.size()};
}

}  // namespace specineq

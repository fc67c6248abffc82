#pragma once

#include "specineq/eigensolver.hpp"
#include "specineq/laplacian.hpp"

#include <cstddef>
#include <vector>

namespace specineq {

/// Uniform grid of interior nodes on a box in H^n = R^{2n+1}.
/// Axis order is x_1..x_n, y_1..y_n, t; axis 0 varies fastest in the node numbering.
/// Node a on an axis sits at lower + (a + 1) * spacing with spacing = (upper - lower)/(count + 1);
/// the box faces carry the Dirichlet zero values and are not unknowns.
struct HeisenbergGrid {
  int n = 1;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> counts;

  int dims() const { return 2 * n + 1; }
  double spacing(int axis) const;
  double coordinate(int axis, int index) const;
  std::size_t node_count() const;
  double cell_volume() const;
};

/// Box [lower, upper]^{2n+1} with `count` interior nodes per axis. Throws std::domain_error.
HeisenbergGrid make_box_grid(int n, double lower, double upper, int count);

/// Throws std::domain_error on non-positive spacings or an empty interior.
void validate(const HeisenbergGrid& grid);

struct KohnOperator {
  SparseMatrix laplacian;            ///< sum_i A_{X_i}^T A_{X_i} + A_{Y_i}^T A_{Y_i}, realises -Delta_{H^n}
  std::vector<SparseMatrix> fields;  ///< A_{X_1}..A_{X_n}, A_{Y_1}..A_{Y_n}
};

/// Centred differences for X_i = d/dx_i + (y_i/2) d/dt and Y_i = d/dy_i - (x_i/2) d/dt with
/// coefficients taken at the stencil centre and zero values outside the box.
/// `freeze_coefficients` drops the d/dt parts (plain Euclidean gradient in x, y).
KohnOperator assemble_kohn(const HeisenbergGrid& grid, bool freeze_coefficients = false);

/// Smallest `k` Dirichlet eigenvalues of -Delta_{H^n}; all positive.
std::vector<double> solve_kohn(const HeisenbergGrid& grid, std::size_t k, const SolveConfig& config);

}  // namespace specineq

#pragma once

#include <vector>

#include "c1k/path.hpp"

namespace c1k {

/// Uniform cell grid. Cell (i, j) covers origin + [i h, (i+1) h] x [j h, (j+1) h].
struct ChargeGrid {
  Point2 origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0;
  int ny = 0;

  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  int index(int i, int j) const { return j * nx + i; }
  Point2 center(int i, int j) const { return origin + Point2{(i + 0.5) * h, (j + 0.5) * h}; }
  Point2 center(int idx) const { return center(idx % nx, idx / nx); }
  void validate() const;
  friend bool operator==(const ChargeGrid&, const ChargeGrid&) = default;
};

/// Per-cell signed masses of the two components.
struct GridCharge {
  ChargeGrid grid;
  std::vector<double> mu1;
  std::vector<double> mu2;

  static GridCharge zeros(const ChargeGrid& g);
  void validate() const;
  GridCharge& operator+=(const GridCharge& o);
  GridCharge scaled(double s) const;
};

struct SignedGridMeasure {
  ChargeGrid grid;
  std::vector<double> mass;

  double total() const;
  double l1() const;
};

/// Backward differences on the staggered grid, in unit masses:
/// div(i,j) = [mu1(i,j) - mu1(i-1,j) + mu2(i,j) - mu2(i,j-1)] / h.
/// A path charge from cell b to cell e has divergence delta_b - delta_e.
SignedGridMeasure divergence(const GridCharge& charge);

/// Exact segment-cell clipping of the velocity measure of the path.
GridCharge charge_of_path(const Polyline& path, const ChargeGrid& grid);

/// Sum over cells of <F(center), (mu1, mu2)>.
double pair(const GridCharge& charge, const VectorField& field);
double pair(const SignedGridMeasure& measure, const ScalarField& phi);

/// Sum over cells of the euclidean norm of (mu1, mu2).
double variation(const GridCharge& charge);
/// Sum over cells of |mu1| + |mu2|: the variation of the edge-flow representation.
double staggered_variation(const GridCharge& charge);

/// <T, grad phi> + integral of phi d(div T).
double annihilation_defect(const GridCharge& charge, const ScalarField& phi,
                           const VectorField& grad_phi);

enum class ArithmeticMode { Float, Exact };

struct DecomposedPath {
  double weight = 0.0;
  std::vector<int> cells;  // cell indices along the path, begin first
  Polyline path;           // through cell centers
};

struct PathDecomposition {
  ChargeGrid grid;
  ArithmeticMode mode = ArithmeticMode::Float;
  std::vector<DecomposedPath> entries;
  std::vector<DecomposedPath> cycles;  // closed: cells.front() == cells.back()
  GridCharge residual;
  /// Path plus cycle plus residual variation minus the charge's variation,
  /// all in the edge-flow (staggered) norm.
  double variation_defect = 0.0;
  /// Same balance with the euclidean cell variation of the charge.
  double l2_excess = 0.0;
};

/// Flow decomposition: sources first in cell order, lexicographically smallest
/// next cell, bottleneck extraction; cycles after all paths. Flow leaving the
/// grid and untraceable float dust go to the residual.
PathDecomposition decompose(const GridCharge& charge, ArithmeticMode mode = ArithmeticMode::Float);

/// || div(charge) - sum w (delta_b - delta_e) - div(residual) ||_1 over cells.
/// Exact mode evaluates in rational arithmetic.
double divergence_identity_check(const PathDecomposition& d, const GridCharge& charge);

/// The charge represented by a decomposition (paths, cycles and residual).
GridCharge reassemble(const PathDecomposition& d);

}  // namespace c1k

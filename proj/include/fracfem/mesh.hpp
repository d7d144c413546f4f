#pragma once

#include <array>
#include <vector>

#include "fracfem/domain.hpp"

namespace fracfem {

/// Uniform mesh with h = 1/n. On the square every cell [ih,(i+1)h]x[jh,(j+1)h]
/// is cut along the diagonal from (i,j) to (i+1,j+1), so interior nodes have
/// valence 6. Node (i,j) has index i + (n+1) j; Dirichlet nodes carry no dof.
class Mesh {
 public:
  static Mesh uniform(DomainKind domain, int n);

  DomainKind domain() const { return domain_; }
  int resolution() const { return n_; }
  double h() const { return h_; }

  const std::vector<std::array<double, 2>>& nodes() const { return nodes_; }
  /// Segments {a, b, -1} on the interval, triangles on the square.
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }

  int dof_count() const { return static_cast<int>(node_of_dof_.size()); }
  /// -1 for boundary nodes.
  int dof_of_node(int node) const { return dof_of_node_[node]; }
  int node_of_dof(int dof) const { return node_of_dof_[dof]; }
  std::array<double, 2> dof_point(int dof) const { return nodes_[node_of_dof_[dof]]; }

  /// Values of all hat functions that are nonzero at p, as (dof, value)
  /// pairs; boundary hats are skipped. p must lie in the closed domain.
  std::vector<std::pair<int, double>> hats_at(double x, double y = 0.0) const;

  double cell_measure(std::size_t cell) const;

 private:
  DomainKind domain_ = DomainKind::Interval;
  int n_ = 0;
  double h_ = 0.0;
  std::vector<std::array<double, 2>> nodes_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<int> dof_of_node_;
  std::vector<int> node_of_dof_;
};

}  // namespace fracfem

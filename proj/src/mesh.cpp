#include "fracfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracfem {

Mesh Mesh::uniform(DomainKind domain, int n) {
  if (n < 2) throw std::invalid_argument("Mesh::uniform: need n >= 2");
  Mesh mesh;
  mesh.domain_ = domain;
  mesh.n_ = n;
  mesh.h_ = 1.0 / n;
  if (domain == DomainKind::Interval) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes_.push_back({double(i) / n, 0.0});
      const bool interior = i > 0 && i < n;
      mesh.dof_of_node_.push_back(interior ? static_cast<int>(mesh.node_of_dof_.size()) : -1);
      if (interior) mesh.node_of_dof_.push_back(i);
    }
    for (int i = 0; i < n; ++i) mesh.cells_.push_back({i, i + 1, -1});
    return mesh;
  }
  const int stride = n + 1;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes_.push_back({double(i) / n, double(j) / n});
      const bool interior = i > 0 && i < n && j > 0 && j < n;
      mesh.dof_of_node_.push_back(interior ? static_cast<int>(mesh.node_of_dof_.size()) : -1);
      if (interior) mesh.node_of_dof_.push_back(i + stride * j);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int p00 = i + stride * j;
      const int p10 = p00 + 1;
      const int p01 = p00 + stride;
      const int p11 = p01 + 1;
      mesh.cells_.push_back({p00, p10, p11});
      mesh.cells_.push_back({p00, p11, p01});
    }
  }
  return mesh;
}

double Mesh::cell_measure(std::size_t) const {
  return domain_ == DomainKind::Interval ? h_ : 0.5 * h_ * h_;
}

std::vector<std::pair<int, double>> Mesh::hats_at(double x, double y) const {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
    throw std::invalid_argument("Mesh::hats_at: point outside the domain");
  }
  std::vector<std::pair<int, double>> out;
  auto push = [&](int node, double value) {
    const int dof = dof_of_node_[node];
    if (dof >= 0 && value != 0.0) out.emplace_back(dof, value);
  };
  const int i = std::min(static_cast<int>(std::floor(x * n_)), n_ - 1);
  const double xi = x * n_ - i;
  if (domain_ == DomainKind::Interval) {
    push(i, 1.0 - xi);
    push(i + 1, xi);
    return out;
  }
  const int j = std::min(static_cast<int>(std::floor(y * n_)), n_ - 1);
  const double eta = y * n_ - j;
  const int stride = n_ + 1;
  const int p00 = i + stride * j;
  if (xi >= eta) {  // lower triangle (p00, p10, p11)
    push(p00, 1.0 - xi);
    push(p00 + 1, xi - eta);
    push(p00 + stride + 1, eta);
  } else {  // upper triangle (p00, p11, p01)
    push(p00, 1.0 - eta);
    push(p00 + stride + 1, xi);
    push(p00 + stride, eta - xi);
  }
  return out;
}

}  // namespace fracfem

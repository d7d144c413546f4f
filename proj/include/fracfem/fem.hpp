#pragma once

// P1 Galerkin on uniform meshes: assembly, projections, load vectors for
// function and measure data, and the discrete eigenproblem K v = lambda M v.

#include <filesystem>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fracfem/data.hpp"
#include "fracfem/mesh.hpp"

namespace fracfem {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Eigenvalues ascending; columns of `vectors` are M-orthonormal, each with
/// its largest-magnitude entry made positive.
struct DiscreteEigen {
  Vector values;
  Eigen::MatrixXd vectors;
};

class FemSystem {
 public:
  explicit FemSystem(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  int dofs() const { return mesh_.dof_count(); }

  /// Dense generalized eigensolve (LAPACK dsygvd), computed on first use and
  /// shared by copies of this system. Thread-safe.
  const DiscreteEigen& eigen() const;

  /// Solves M c = b with a cached sparse Cholesky factor.
  Vector solve_mass(const Vector& b) const;
  /// Solves K c = b with a cached sparse Cholesky factor.
  Vector solve_stiffness(const Vector& b) const;

 private:
  struct Cache;
  Mesh mesh_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  std::shared_ptr<Cache> cache_;
};

/// Exact element integration; Dirichlet rows and columns removed.
FemSystem assemble(const Mesh& mesh);

/// b_i = <d, hat_i>: closed forms for sines (via the hat Fourier transform),
/// polynomials, indicators (exact clipping) and measures (hat values at the
/// support); Gauss quadrature for datum::Function.
Vector load_vector(const Mesh& mesh, const SpatialDatum& d);

/// b_i = (grad d, grad hat_i); only for data with has_gradient().
Vector gradient_load(const Mesh& mesh, const SpatialDatum& d);

/// Nodal interpolant (functions only).
Vector interpolate(const Mesh& mesh, const SpatialDatum& d);

/// P_h d: M c = <d, hat>.
Vector l2_project(const FemSystem& system, const SpatialDatum& d);
/// R_h d: K c = (grad d, grad hat). Throws std::invalid_argument for data
/// without H^1 regularity; use l2_project there.
Vector ritz_project(const FemSystem& system, const SpatialDatum& d);

/// (sum_j (lambda_j^h)^p ((c, phi_j^h))^2)^{1/2} with (c, phi_j^h) = v_j^T M c.
double discrete_hs_norm(const FemSystem& system, const Vector& c, double p);

/// sqrt(c^T M c) and sqrt(c^T K c) without the eigensolve.
double l2_norm(const FemSystem& system, const Vector& c);
double h1_seminorm(const FemSystem& system, const Vector& c);

/// w_m = (sum_i c_i hat_i, phi_m) for each mode, exact: the hat Fourier
/// transform is a product of sincs (three-direction box spline on the square).
std::vector<double> mode_pairing(const Mesh& mesh, const Vector& c,
                                 const std::vector<SpectralMode>& modes);

/// Writes nodes.csv, cells.csv, mass.coo and stiffness.coo into dir.
/// COO lines are "row col value" over dof indices, 0-based.
void dump_system(const FemSystem& system, const std::filesystem::path& dir);

}  // namespace fracfem

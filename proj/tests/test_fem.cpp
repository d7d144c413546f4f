#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "fracfem/fem.hpp"
#include "fracfem/spectral.hpp"
#include "oracles.hpp"

using namespace fracfem;

namespace {

Vector hat(int dofs, int i) {
  Vector c = Vector::Zero(dofs);
  c[i] = 1.0;
  return c;
}

// <d, hat_i> by brute force on the hat support.
double load_oracle_2d(const Mesh& mesh, int dof, const std::function<double(double, double)>& f,
                      double x0 = 0.0, double x1 = 1.0, double y0 = 0.0, double y1 = 1.0) {
  const auto p = mesh.dof_point(dof);
  const double h = mesh.h();
  const double ax = std::max(x0, p[0] - h), bx = std::min(x1, p[0] + h);
  const double ay = std::max(y0, p[1] - h), by = std::min(y1, p[1] + h);
  if (ax >= bx || ay >= by) return 0.0;
  const Vector none;
  return oracle::box_integral(
      mesh.resolution(),
      [&](double x, double y) { return f(x, y) * oracle::p1_value(mesh, none, x, y, dof); }, ax,
      bx, ay, by);
}

}  // namespace

TEST_CASE("mesh topology") {
  const Mesh line = Mesh::uniform(DomainKind::Interval, 8);
  CHECK(line.nodes().size() == 9);
  CHECK(line.dof_count() == 7);
  CHECK(line.dof_of_node(0) == -1);
  CHECK(line.dof_point(0)[0] == doctest::Approx(0.125));

  const Mesh sq = Mesh::uniform(DomainKind::Square, 4);
  CHECK(sq.nodes().size() == 25);
  CHECK(sq.dof_count() == 9);
  CHECK(sq.cells().size() == 32);
  // every interior node touches six triangles
  std::vector<int> valence(sq.nodes().size(), 0);
  for (const auto& c : sq.cells()) {
    for (int v : c) ++valence[v];
  }
  for (int d = 0; d < sq.dof_count(); ++d) CHECK(valence[sq.node_of_dof(d)] == 6);
  double area = 0.0;
  for (std::size_t c = 0; c < sq.cells().size(); ++c) area += sq.cell_measure(c);
  CHECK(area == doctest::Approx(1.0));
  CHECK_THROWS_AS(Mesh::uniform(DomainKind::Square, 1), std::invalid_argument);
  CHECK_THROWS_AS(sq.hats_at(1.5, 0.5), std::invalid_argument);
}

TEST_CASE("hat values at points sum to one away from the boundary") {
  const Mesh sq = Mesh::uniform(DomainKind::Square, 5);
  for (double x : {0.31, 0.5, 0.47}) {
    for (double y : {0.33, 0.62}) {
      double total = 0.0;
      for (const auto& [dof, v] : sq.hats_at(x, y)) {
        total += v;
        CHECK(v == doctest::Approx(oracle::p1_value(sq, Vector(), x, y, dof)));
      }
      CHECK(total == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("1D matrices have the textbook stencils") {
  const int n = 10;
  const double h = 1.0 / n;
  const FemSystem s = assemble(Mesh::uniform(DomainKind::Interval, n));
  const Eigen::MatrixXd m(s.mass());
  const Eigen::MatrixXd k(s.stiffness());
  for (int i = 0; i < s.dofs(); ++i) {
    CHECK(m(i, i) == doctest::Approx(4.0 * h / 6.0));
    CHECK(k(i, i) == doctest::Approx(2.0 / h));
    if (i + 1 < s.dofs()) {
      CHECK(m(i, i + 1) == doctest::Approx(h / 6.0));
      CHECK(k(i, i + 1) == doctest::Approx(-1.0 / h));
    }
  }
}

TEST_CASE("2D matrices: five-point stiffness, seven-point mass") {
  const int n = 6;
  const double h = 1.0 / n;
  const Mesh mesh = Mesh::uniform(DomainKind::Square, n);
  const FemSystem s = assemble(mesh);
  const Eigen::MatrixXd m(s.mass());
  const Eigen::MatrixXd k(s.stiffness());
  const int centre = mesh.dof_of_node(3 + 7 * 3);
  CHECK(k(centre, centre) == doctest::Approx(4.0));
  CHECK(m(centre, centre) == doctest::Approx(h * h / 2.0));
  int stiff_neighbours = 0;
  int mass_neighbours = 0;
  for (int j = 0; j < s.dofs(); ++j) {
    if (j == centre) continue;
    if (std::abs(k(centre, j)) > 1e-14) {
      ++stiff_neighbours;
      CHECK(k(centre, j) == doctest::Approx(-1.0));
    }
    if (std::abs(m(centre, j)) > 1e-14) {
      ++mass_neighbours;
      CHECK(m(centre, j) == doctest::Approx(h * h / 12.0));
    }
  }
  CHECK(stiff_neighbours == 4);
  CHECK(mass_neighbours == 6);
  // mass entries against brute force
  for (int j : {centre, centre + 1, centre + n}) {
    const Vector hj = hat(s.dofs(), j);
    const double ref = load_oracle_2d(mesh, centre, [&](double x, double y) {
      return oracle::p1_value(mesh, hj, x, y);
    });
    CHECK(m(centre, j) == doctest::Approx(ref).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("discrete eigenvalues") {
  SUBCASE("interval closed form") {
    const int n = 16;
    const double h = 1.0 / n;
    const FemSystem s = assemble(Mesh::uniform(DomainKind::Interval, n));
    const auto& e = s.eigen();
    for (int j = 1; j < n; ++j) {
      const double c = std::cos(j * M_PI * h);
      CHECK(e.values[j - 1] == doctest::Approx(6.0 / (h * h) * (1.0 - c) / (2.0 + c)));
    }
  }
  SUBCASE("square: residual, M-orthonormality, sign convention") {
    const FemSystem s = assemble(Mesh::uniform(DomainKind::Square, 8));
    const auto& e = s.eigen();
    const Eigen::MatrixXd m(s.mass());
    const Eigen::MatrixXd k(s.stiffness());
    const Eigen::MatrixXd gram = e.vectors.transpose() * m * e.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(s.dofs(), s.dofs())).cwiseAbs().maxCoeff() < 1e-11);
    const Eigen::MatrixXd res = k * e.vectors - m * e.vectors * e.values.asDiagonal();
    CHECK(res.cwiseAbs().maxCoeff() < 1e-8 * e.values.maxCoeff());
    CHECK(e.values[0] > 2.0 * M_PI * M_PI);  // conforming: above the continuous value
    CHECK(e.values[0] < 2.2 * M_PI * M_PI);
    for (int j = 0; j < s.dofs(); ++j) {
      Eigen::Index at = 0;
      e.vectors.col(j).cwiseAbs().maxCoeff(&at);
      CHECK(e.vectors(at, j) > 0.0);
    }
    // copies share the cached decomposition
    const FemSystem copy = s;
    CHECK(&copy.eigen() == &e);
  }
}

TEST_CASE("1D load vectors against quadrature") {
  const int n = 12;
  const Mesh mesh = Mesh::uniform(DomainKind::Interval, n);
  std::vector<double> breaks;
  for (int i = 0; i <= n; ++i) breaks.push_back(double(i) / n);
  auto check = [&](const SpatialDatum& d, const std::function<double(double)>& f,
                   std::vector<double> extra = {}) {
    const Vector b = load_vector(mesh, d);
    auto br = breaks;
    br.insert(br.end(), extra.begin(), extra.end());
    for (int i = 0; i < mesh.dof_count(); ++i) {
      const double ref = oracle::integrate(
          [&](double x) { return f(x) * oracle::p1_value(mesh, Vector(), x, 0.0, i); }, 0.0, 1.0,
          br);
      CHECK(b[i] == doctest::Approx(ref).scale(1.0).epsilon(1e-13));
    }
  };
  check(datum::Sine{3, 0, 2.0}, [](double x) { return 2.0 * std::sin(3 * M_PI * x); });
  check(datum::Bubble{1.5}, [](double x) { return 1.5 * x * (1.0 - x); });
  check(datum::Indicator{0.13, 0.61}, [](double x) { return x >= 0.13 && x <= 0.61 ? 1.0 : 0.0; },
        {0.13, 0.61});
  check(datum::Function{[](double x) { return std::exp(x); }}, [](double x) { return std::exp(x); });

  const Vector delta = load_vector(mesh, datum::Dirac{0.3});
  for (int i = 0; i < mesh.dof_count(); ++i) {
    CHECK(delta[i] == doctest::Approx(oracle::p1_value(mesh, Vector(), 0.3, 0.0, i)).scale(1.0));
  }
}

TEST_CASE("gradient loads") {
  const int n = 9;
  const Mesh mesh = Mesh::uniform(DomainKind::Interval, n);
  const Vector g = gradient_load(mesh, datum::Bubble{1.0});
  // (u', hat') = (-u'', hat) = 2 (1, hat) = 2h for x(1-x)
  for (int i = 0; i < mesh.dof_count(); ++i) CHECK(g[i] == doctest::Approx(2.0 / n));
  CHECK_THROWS_AS(gradient_load(mesh, datum::Indicator{}), std::invalid_argument);
}

TEST_CASE("2D load vectors against quadrature") {
  const int n = 6;
  const Mesh mesh = Mesh::uniform(DomainKind::Square, n);
  SUBCASE("sine") {
    const Vector b = load_vector(mesh, datum::Sine{2, 3, 1.0});
    for (int i = 0; i < mesh.dof_count(); i += 4) {
      const double ref = load_oracle_2d(mesh, i, [](double x, double y) {
        return std::sin(2 * M_PI * x) * std::sin(3 * M_PI * y);
      });
      CHECK(b[i] == doctest::Approx(ref).scale(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("box not aligned with the mesh") {
    const datum::IndicatorBox box{0.1, 0.55, 0.23, 0.9};
    const Vector b = load_vector(mesh, box);
    for (int i = 0; i < mesh.dof_count(); ++i) {
      const double ref = load_oracle_2d(mesh, i, [](double, double) { return 1.0; }, box.x0,
                                        box.x1, box.y0, box.y1);
      CHECK(b[i] == doctest::Approx(ref).scale(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("line mass") {
    const Mesh odd = Mesh::uniform(DomainKind::Square, 7);
    const Vector b = load_vector(odd, datum::DiracSquareBoundary{0.25, 0.75});
    for (int i = 0; i < odd.dof_count(); ++i) {
      double ref = 0.0;
      const double len = 0.5;
      // four edges, each parametrised over s in [0, 1]
      const std::array<std::array<double, 4>, 4> edges{{{0.25, 0.25, len, 0.0},
                                                        {0.25, 0.75, len, 0.0},
                                                        {0.25, 0.25, 0.0, len},
                                                        {0.75, 0.25, 0.0, len}}};
      for (const auto& e : edges) {
        ref += len * oracle::integrate(
                         [&](double s) {
                           return oracle::p1_value(odd, Vector(), e[0] + s * e[2], e[1] + s * e[3], i);
                         },
                         0.0, 1.0, oracle::line_breaks(7, e[0], e[1], e[2], e[3]));
      }
      CHECK(b[i] == doctest::Approx(ref).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("projections") {
  const Mesh mesh = Mesh::uniform(DomainKind::Interval, 10);
  const FemSystem s = assemble(mesh);
  // 1D Ritz projection is nodally exact
  const Vector r = ritz_project(s, datum::Bubble{1.0});
  const Vector interp = interpolate(mesh, datum::Bubble{1.0});
  CHECK((r - interp).cwiseAbs().maxCoeff() < 1e-13);
  // P_h reproduces X_h functions: the L2 projection of a discrete
  // eigenfunction's load is that eigenfunction
  const Vector v = s.eigen().vectors.col(2);
  const Vector p = s.solve_mass(s.mass() * v);
  CHECK((p - v).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(ritz_project(s, datum::Dirac{0.5}), std::invalid_argument);
  CHECK_THROWS_AS(interpolate(mesh, datum::Dirac{0.5}), std::invalid_argument);
  CHECK(discrete_hs_norm(s, v, 1.0) == doctest::Approx(std::sqrt(s.eigen().values[2])));
  CHECK(l2_norm(s, v) == doctest::Approx(1.0));
  CHECK(h1_seminorm(s, v) == doctest::Approx(std::sqrt(s.eigen().values[2])));
}

TEST_CASE("mode pairing against quadrature") {
  SUBCASE("interval") {
    const Mesh mesh = Mesh::uniform(DomainKind::Interval, 9);
    const Vector c = interpolate(mesh, datum::Function{[](double x) { return std::cos(3 * x); }});
    const auto modes = laplace_eigenpairs(DomainKind::Interval, 30);
    const auto w = mode_pairing(mesh, c, modes);
    std::vector<double> br;
    for (int i = 0; i <= 9; ++i) br.push_back(i / 9.0);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const double ref = oracle::integrate(
          [&](double x) { return oracle::p1_value(mesh, c, x, 0.0) * modes[m].eval(x); }, 0.0,
          1.0, br);
      CHECK(w[m] == doctest::Approx(ref).scale(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("square") {
    const Mesh mesh = Mesh::uniform(DomainKind::Square, 5);
    Vector c(mesh.dof_count());
    for (int i = 0; i < c.size(); ++i) c[i] = std::sin(1.0 + 0.7 * i);
    const auto modes = tensor_modes(DomainKind::Square, 4);
    const auto w = mode_pairing(mesh, c, modes);
    for (std::size_t m = 0; m < modes.size(); m += 3) {
      const double ref = oracle::box_integral(
          5, [&](double x, double y) { return oracle::p1_value(mesh, c, x, y) * modes[m].eval(x, y); },
          0.0, 1.0, 0.0, 1.0);
      CHECK(w[m] == doctest::Approx(ref).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("system dump") {
  const auto dir = std::filesystem::temp_directory_path() / "fracfem_dump_test";
  std::filesystem::remove_all(dir);
  const FemSystem s = assemble(Mesh::uniform(DomainKind::Square, 3));
  dump_system(s, dir);
  for (const char* f : {"nodes.csv", "cells.csv", "mass.coo", "stiffness.coo"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::ifstream is(dir / "stiffness.coo");
  std::string header;
  std::getline(is, header);
  CHECK(header.starts_with("% 4 4 "));
  int r = 0, c = 0;
  double v = 0.0;
  std::set<std::pair<int, int>> seen;
  while (is >> r >> c >> v) seen.insert({r, c});
  CHECK(seen.size() == static_cast<std::size_t>(s.stiffness().nonZeros()));
  std::filesystem::remove_all(dir);
}

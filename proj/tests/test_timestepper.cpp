#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "fracfem/fem.hpp"
#include "fracfem/timestepper.hpp"

using namespace fracfem;

TEST_CASE("L1 weights") {
  const auto d = l1_weights(0.5, 100);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  // telescoping: sum_{j<100} d_j = 100^{1/2}
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(10.0).epsilon(1e-12));
  for (std::size_t j = 1; j < d.size(); ++j) CHECK(d[j] < d[j - 1]);
  CHECK_THROWS_AS(l1_weights(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(l1_weights(0.0, 4), std::invalid_argument);
  CHECK(l1_weights(0.3, 0).empty());
}

TEST_CASE("combined weights") {
  const auto single = p_weights(FracOrders(0.4), 0.01, 20);
  CHECK(single.p == l1_weights(0.4, 20));
  CHECK(single.gamma == doctest::Approx(boost::math::tgamma(1.6) * std::pow(0.01, 0.4)));

  const auto two = p_weights(FracOrders::two_term(0.5, 0.2), 0.1, 5);
  const double expect =
      1.0 + boost::math::tgamma(1.5) * std::pow(0.1, 0.3) / boost::math::tgamma(1.8);
  CHECK(two.p[0] == doctest::Approx(expect).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double alpha = 0.05 + 0.9 * unit(rng);
    std::vector<LowerOrder> lower;
    for (int i = 0; i < 3; ++i) lower.push_back({alpha * unit(rng) * 0.99 + 1e-3, 3.0 * unit(rng) + 1e-3});
    std::sort(lower.begin(), lower.end(), [](auto a, auto b) { return a.order > b.order; });
    const auto w = p_weights(FracOrders(alpha, lower), std::pow(10.0, -3.0 * unit(rng)), 200);
    for (std::size_t j = 1; j < w.p.size(); ++j) CHECK(w.p[j] < w.p[j - 1]);
    CHECK(w.p.back() > 0.0);
  }
}

TEST_CASE("L1 Caputo approximation") {
  const double alpha = 0.4;
  std::vector<double> ones(12, 3.0);
  CHECK(caputo_l1_apply(ones, alpha, 0.1) == 0.0);

  // linear functions are reproduced exactly: D^a t = t^{1-a} / Gamma(2-a)
  const int k = 40;
  const double tau = 1.0 / k;
  std::vector<double> line(k + 1);
  for (int n = 0; n <= k; ++n) line[n] = n * tau;
  CHECK(caputo_l1_apply(line, alpha, tau) ==
        doctest::Approx(1.0 / boost::math::tgamma(2.0 - alpha)).epsilon(1e-12));

  // t^2 converges at rate 2 - alpha: D^a t^2 = 2 t^{2-a} / Gamma(3-a)
  const double exact = 2.0 / boost::math::tgamma(3.0 - alpha);
  std::vector<double> errors;
  for (int steps : {20, 40, 80, 160}) {
    std::vector<double> u(steps + 1);
    for (int n = 0; n <= steps; ++n) u[n] = std::pow(double(n) / steps, 2);
    errors.push_back(std::abs(caputo_l1_apply(u, alpha, 1.0 / steps) - exact));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    CHECK(std::log2(errors[i] / errors[i + 1]) == doctest::Approx(2.0 - alpha).epsilon(0.05 / 1.6));
  }
  CHECK_THROWS_AS(caputo_l1_apply(std::vector<double>{1.0}, alpha, 0.1), std::invalid_argument);
}

TEST_CASE("stepper basics") {
  const FemSystem s = assemble(Mesh::uniform(DomainKind::Interval, 9));
  const FracOrders o = FracOrders::two_term(0.6, 0.3, 2.0);
  const TimeGrid grid(1.0, 4);

  SUBCASE("zero data stays zero") {
    FullyDiscreteStepper z(s, o, grid, Vector::Zero(s.dofs()));
    for (int n = 0; n < 4; ++n) CHECK(z.step(Vector::Zero(s.dofs())).norm() == 0.0);
    CHECK_THROWS_AS(z.step(Vector::Zero(s.dofs())), std::logic_error);
  }
  SUBCASE("first two steps against a dense solve") {
    Vector u0 = Vector::LinSpaced(s.dofs(), 0.1, 1.0);
    const Vector load = Vector::Constant(s.dofs(), 0.05);
    FullyDiscreteStepper st(s, o, grid, u0);
    const auto& w = st.weights();
    const Eigen::MatrixXd m = Eigen::MatrixXd(s.mass());
    const Eigen::MatrixXd a = w.p[0] * m + w.gamma * Eigen::MatrixXd(s.stiffness());
    const Vector u1 = a.lu().solve(w.p[0] * m * u0 + w.gamma * load);
    CHECK((st.step(load) - u1).cwiseAbs().maxCoeff() < 1e-13);
    const Vector u2 = a.lu().solve(m * (w.p[1] * u0 + (w.p[0] - w.p[1]) * u1) + w.gamma * load);
    CHECK((st.step(load) - u2).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(st.current_step() == 2);
  }
  SUBCASE("grid and size validation") {
    CHECK_THROWS_AS(TimeGrid(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(FullyDiscreteStepper(s, o, grid, Vector::Zero(3)), std::invalid_argument);
  }
  SUBCASE("checkpoints") {
    const auto traj = solve_fully_discrete(s, o, grid, Vector::Ones(s.dofs()), {}, {2});
    CHECK(traj.steps == std::vector<int>{0, 2, 4});
    CHECK(traj.times.back() == 1.0);
    CHECK_THROWS_AS(solve_fully_discrete(s, o, grid, Vector::Ones(s.dofs()), {}, {7}),
                    std::invalid_argument);
  }
}

TEST_CASE("homogeneous solutions do not grow") {
  const FemSystem s = assemble(Mesh::uniform(DomainKind::Interval, 20));
  const FracOrders o = FracOrders::two_term(0.3, 0.1, 1.0);
  const Vector u0 = load_vector(s.mesh(), datum::Dirac{0.5});
  const auto r = stability_probe(s, o, TimeGrid(1.0, 50), u0,
                                 [&](int) { return Vector::Zero(s.dofs()).eval(); });
  CHECK(r.max_norm == doctest::Approx(l2_norm(s, u0)));
  CHECK(r.holds);
  CHECK(r.constant == doctest::Approx(boost::math::tgamma(1.7) / 0.7));
}

TEST_CASE("alpha near one is close to backward Euler for the heat equation") {
  // Independent oracle: dense backward Euler (M + tau K) U^{n+1} = M U^n.
  const FemSystem s = assemble(Mesh::uniform(DomainKind::Interval, 32));
  const Vector u0 = l2_project(s, datum::Indicator{0.0, 0.5});
  const int k = 200;
  const double tau = 0.1 / k;
  const Eigen::MatrixXd m = Eigen::MatrixXd(s.mass());
  const Eigen::MatrixXd a = m + tau * Eigen::MatrixXd(s.stiffness());
  const auto lu = a.partialPivLu();
  Vector heat = u0;
  for (int n = 0; n < k; ++n) heat = lu.solve(m * heat);
  const auto traj = solve_fully_discrete(s, FracOrders(0.999, {}, 0.1), TimeGrid(0.1, k), u0, {});
  CHECK(l2_norm(s, traj.states.back() - heat) < 0.02 * l2_norm(s, heat));
}

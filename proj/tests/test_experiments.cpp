#include <doctest.h>

#include <cmath>

#include "fracfem/cases.hpp"
#include "fracfem/config.hpp"
#include "fracfem/convergence.hpp"

using namespace fracfem;

TEST_CASE("rate estimation") {
  const std::vector<double> h{0.5, 0.25, 0.125};
  CHECK(estimate_rate(h, std::vector<double>{4.0, 1.0, 0.25}) == doctest::Approx(2.0));
  CHECK(estimate_rate(h, std::vector<double>{1.0, 1.0, 1.0}) == doctest::Approx(0.0).scale(1.0));

  // single-term row: tau = 1/10 .. 1/160, alpha = 0.5, theory 1.5
  const std::vector<double> tau{0.1, 0.05, 0.025, 0.0125, 0.00625};
  const std::vector<double> err{1.45e-3, 5.11e-4, 1.78e-4, 6.17e-5, 2.08e-5};
  const RateFit fit = fit_rate(tau, err);
  CHECK(std::abs(fit.rate - 1.55) < 0.05);
  CHECK(fit.pairwise.size() == 4);
  CHECK_FALSE(fit.flagged);

  CHECK_THROWS_AS(estimate_rate(std::vector<double>{1.0, 0.5}, std::vector<double>{1.0, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_rate(std::vector<double>{1.0, 0.5, 0.1}, std::vector<double>{1, 1, 1}),
                  std::invalid_argument);
  // h = 1/(2^k + 1) is close enough to geometric
  CHECK_NOTHROW(estimate_rate(std::vector<double>{1.0 / 9, 1.0 / 17, 1.0 / 33, 1.0 / 65},
                              std::vector<double>{1, 0.5, 0.25, 0.125}));
  const RateFit bad = fit_rate(h, std::vector<double>{1.0, 0.0, 0.1});
  CHECK(std::isnan(bad.rate));
  CHECK(bad.flagged);
  // a kinked ladder is fitted but flagged
  CHECK(fit_rate(std::vector<double>{0.5, 0.25, 0.125, 0.0625},
                 std::vector<double>{1.0, 0.25, 0.2, 0.05})
            .flagged);
}

namespace {

ConvergenceReport sample_report() {
  ConvergenceReport r;
  r.case_name = "2b";
  r.study = "space";
  r.t_eval = 0.01;
  r.points = {{0.125, 3.1e-3, 0.11}, {0.0625, 7.7e-4, 0.055}, {0.03125, 1.9e-4, 0.0276}};
  r.theory_l2 = 2.0;
  r.theory_h1 = 1.0;
  r.fit();
  r.notes.push_back("hand made");
  return r;
}

}  // namespace

TEST_CASE("table round trip") {
  const ConvergenceReport r = sample_report();
  const std::string text = emit_table(r);
  CHECK(text.starts_with("param,l2_error,h1_error\n0.125,0.0031,0.11\n"));
  CHECK(text.find("\n# rate_l2=") != std::string::npos);
  CHECK(text.find("\n# rate_h1=") != std::string::npos);
  CHECK(text.find("\n# theory=2\n") != std::string::npos);
  CHECK(text == emit_table(r));
  const ConvergenceReport back = parse_table(text);
  CHECK(back == r);
  CHECK(emit_table(back) == text);

  ConvergenceReport empty;
  empty.study = "time";
  empty.theory_h1 = NAN;
  empty.fit();
  CHECK(empty.flagged);
  CHECK(parse_table(emit_table(empty)) == empty);

  CHECK_THROWS_AS(parse_table("nope\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_table("param,l2_error,h1_error\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_table("param,l2_error,h1_error\n# bogus=1\n"), std::invalid_argument);
}

TEST_CASE("pass criteria") {
  ConvergenceReport r = sample_report();
  r.rate_l2 = 1.86;
  r.rate_h1 = 1.2;
  CHECK(r.pass_l2());
  CHECK_FALSE(r.pass_h1());
  r.theory_h1 = NAN;
  CHECK(r.pass_h1());
}

TEST_CASE("configuration parsing") {
  const char* text = R"({
    "case": "2b",
    "orders": {"alpha": 0.5, "lower": [{"order": 0.2, "weight": 1.0}]},
    "ladders": {"resolutions": [8, 16, 32], "steps": [10, 20]},
    "t_eval": [1.0, 0.01],
    "tolerances": {"rate": 0.2},
    "output_dir": "out"
  })";
  const RunConfig c = parse_config(text);
  CHECK(c.case_name == "2b");
  CHECK(c.orders.alpha() == 0.5);
  CHECK(c.orders.lower_count() == 1);
  CHECK(c.domain == DomainKind::Interval);
  CHECK(c.resolutions == std::vector<int>{8, 16, 32});
  CHECK(c.steps == std::vector<int>{10, 20});
  CHECK(c.t_eval == std::vector<double>{1.0, 0.01});
  CHECK(c.rate_tolerance == 0.2);
  CHECK(c.output_dir == "out");

  // the hash ignores key order and whitespace
  const RunConfig d = parse_config(
      R"({"output_dir":"out","tolerances":{"rate":0.2},"t_eval":[1.0,0.01],)"
      R"("ladders":{"steps":[10,20],"resolutions":[8,16,32]},)"
      R"("orders":{"lower":[{"weight":1.0,"order":0.2}],"alpha":0.5},"case":"2b"})");
  CHECK(d.hash == c.hash);
  CHECK(hex64(c.hash).size() == 16);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);

  CHECK(parse_config(R"({"case": "4a", "orders": {"alpha": 0.3}})").domain == DomainKind::Square);
  CHECK(parse_config(R"({"case": "2c", "orders": {"alpha": 0.3}})").aligned == false);
  CHECK(parse_config(R"({"case": "2b", "orders": {"alpha": 0.3}, "t_eval": 1})").t_eval ==
        std::vector<double>{1.0});

  CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"orders": {"alpha": 0.5}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"case": "9z", "orders": {"alpha": 0.5}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"case": "2b", "orders": {"alpha": 1.5}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"case": "2b", "orders": {"alpha": 0.5}, "extra": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"case": "2b", "orders": {"alpha": 0.5}, "domain": "square"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"case": "2b", "orders": {"alpha": 0.5}, "t_eval": 2.0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(R"({"case": "2b", "orders": {"alpha": 0.5}, "ladders": {"resolutions": [1]}})"),
      std::invalid_argument);
}

TEST_CASE("case catalog") {
  const FracOrders o = FracOrders::two_term(0.5, 0.2);
  const auto names = case_names();
  CHECK(names.size() == 9);
  for (const auto& n : names) CHECK(make_case(n, o).name == n);
  CHECK_THROWS_AS(make_case("5a", o), std::invalid_argument);

  CHECK(make_case("2a", o).regularity == 2.0);
  CHECK(make_case("2b", o).regularity == 0.5);
  CHECK(make_case("2c", o).regularity == -0.5);
  CHECK(make_case("2c", o).needs_unaligned_mesh());
  CHECK(make_case("2c", o).theory_l2 == 1.5);
  CHECK(make_case("2c", o).normalization() == 1.0);
  CHECK(make_case("2b", o).normalization() == doctest::Approx(std::sqrt(0.5)));
  CHECK(make_case("smooth", o).reference == ReferenceKind::Manufactured);
  CHECK(make_case("3a", o).homogeneous() == false);
  CHECK(make_case("4a", o).domain == DomainKind::Square);
  CHECK(make_case("4b", o).domain == DomainKind::Square);
  CHECK(make_case("2b", o).blowup_exponent(0.5) == doctest::Approx(-0.375));
  CHECK(make_case("2c", o).blowup_exponent(0.5) == doctest::Approx(-0.5));
}

TEST_CASE("small space study passes on smooth data") {
  const FracOrders o = FracOrders::two_term(0.5, 0.2);
  const auto reports =
      run_convergence_space(make_case("2a", o), o, {1.0}, {8, 16, 32}, SpaceStudyOptions{4096});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].pass_l2());
  CHECK(reports[0].pass_h1());
  CHECK(reports[0].points.size() == 3);
  CHECK(reports[0].study == "space");
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "analytic.hpp"
#include "error.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"

using namespace polywind;
using std::numbers::pi;

namespace {

McConfig mc_with(std::size_t replicates, double dt = 0.01) {
  McConfig mc;
  mc.replicates = replicates;
  mc.dt = dt;
  return mc;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto e = summarize(xs, 1, 2);
  CHECK(e.mean == 2.5);
  CHECK(*e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.replicates() == 7);
  CHECK(e.timeout_warning());

  const std::vector<double> one{3.0};
  CHECK_FALSE(summarize(one).std_error.has_value());
  McEstimate quiet;
  quiet.n_used = 199;
  quiet.n_timeout = 2;
  CHECK_FALSE(quiet.timeout_warning());
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(mc_with(0)), Error);
  CHECK_THROWS_AS(validate(mc_with(10, 0.0)), Error);
  McConfig mc;
  mc.t_max = 0.001;
  CHECK_THROWS_AS(validate(mc), Error);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("stretched MRT at n=100 lands within 30% of the asymptotic formula") {
  const auto p = make_params(100, 10.0, 0.3, 0.25);
  const auto e = estimate_mrt(p, Stretched{}, mc_with(300));
  const double formula = analytic::mrt_stretched(100, 10.0);
  CHECK(e.std_error.has_value());
  CHECK(e.n_used + e.n_timeout + e.n_origin_fail == 300);
  CHECK(std::abs(e.mean - formula) < 0.3 * formula);
}

TEST_CASE("single replicate reports no standard error") {
  const auto e = estimate_mrt(make_params(10, 10.0, 0.3, 0.25), Stretched{}, mc_with(1));
  CHECK(e.n_used == 1);
  CHECK_FALSE(e.std_error.has_value());
}

TEST_CASE("estimates are bit-identical across reruns and worker counts") {
  const auto p = make_params(30, 10.0, 0.3, 0.25);
  auto mc = mc_with(64);
  mc.max_workers_hint = 1;
  const auto a = estimate_mrt(p, UniformRandom{}, mc);
  const auto b = estimate_mrt(p, UniformRandom{}, mc);
  mc.max_workers_hint = 5;
  const auto c = estimate_mrt(p, UniformRandom{}, mc);
  CHECK(a.mean == b.mean);
  CHECK(a.mean == c.mean);
  CHECK(*a.std_error == *c.std_error);
  mc.seed = 2;
  CHECK(estimate_mrt(p, UniformRandom{}, mc).mean != a.mean);
}

TEST_CASE("standard error shrinks like one over root replicates") {
  const auto p = make_params(10, 10.0, 0.3, 0.25);
  const double s100 = *estimate_mrt(p, Stretched{}, mc_with(100)).std_error;
  const double s400 = *estimate_mrt(p, Stretched{}, mc_with(400)).std_error;
  const double s1600 = *estimate_mrt(p, Stretched{}, mc_with(1600)).std_error;
  for (double ratio : {s100 / s400, s400 / s1600}) {
    CHECK(ratio > 2.0 / 1.5);
    CHECK(ratio < 2.0 * 1.5);
  }
}

TEST_CASE("runs in which every replicate times out are an error") {
  auto mc = mc_with(5, 0.01);
  mc.t_max = 0.02;
  try {
    estimate_mrt(make_params(100, 1e-6, 0.3, 0.25), Stretched{}, mc);
    FAIL("expected a runtime error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Runtime);
  }
}

TEST_CASE("partial timeouts are counted and excluded") {
  auto mc = mc_with(200, 0.01);
  mc.t_max = 0.5;
  const auto e = estimate_mrt(make_params(100, 10.0, 0.3, 0.25), Stretched{}, mc);
  CHECK(e.n_timeout > 0);
  CHECK(e.n_used > 0);
  CHECK(e.n_used + e.n_timeout + e.n_origin_fail == 200);
  CHECK(e.mean < 0.5);
  CHECK(e.timeout_warning());
}

TEST_CASE("sweep axes") {
  CHECK(parse_axis("n") == SweepAxis::N);
  CHECK(parse_axis("D") == SweepAxis::D);
  CHECK(parse_axis("L") == SweepAxis::L);
  CHECK(parse_axis("phi0") == SweepAxis::Phi0);
  CHECK_FALSE(parse_axis("x").has_value());
  CHECK(std::string(axis_name(SweepAxis::Phi0)) == "phi0");
}

TEST_CASE("sweep over n from 50 to 300 in steps of 10 has 26 rows") {
  std::vector<double> ns;
  for (int n = 50; n <= 300; n += 10) ns.push_back(n);
  const auto rows = sweep(make_params(50, 10.0, 0.3, 0.25), SweepAxis::N, ns, Stretched{}, mc_with(2));
  REQUIRE(rows.size() == 26);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].params.n == 50 + 10 * static_cast<int>(i));
    CHECK(rows[i].feasible);
    CHECK(rows[i].estimate.has_value());
  }
}

TEST_CASE("empty sweep") {
  CHECK(sweep(make_params(5, 1.0, 0.3, 0.25), SweepAxis::N, {}, Stretched{}, mc_with(2)).empty());
}

TEST_CASE("infeasible sweep points are flagged, not dropped") {
  const std::vector<double> Ls{0.3, 5.0, 0.1};
  const auto rows = sweep(make_params(10, 10.0, 0.3, 0.25), SweepAxis::L, Ls, Stretched{}, mc_with(3));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].feasible);
  CHECK_FALSE(rows[1].feasible);
  CHECK_FALSE(rows[1].estimate.has_value());
  CHECK_FALSE(rows[1].note.empty());
  CHECK(rows[2].feasible);

  const std::vector<double> phis{pi, 7.0};
  const auto bl = sweep(make_params(10, 1.0, 0.1, 0.2), SweepAxis::Phi0, phis, Stretched{}, mc_with(3));
  CHECK(bl[0].feasible);
  CHECK_FALSE(bl[1].feasible);
}

TEST_CASE("boundary-layer MRT decreases as the start approaches a full turn") {
  const std::vector<double> phis{pi / 2, pi, 3 * pi / 2, 7 * pi / 4};
  const auto rows = sweep(make_params(10, 1.0, 0.1, 0.2), SweepAxis::Phi0, phis, Stretched{}, mc_with(300));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].estimate->mean <= rows[i - 1].estimate->mean);
}

TEST_CASE("Brownian exit time from a symmetric interval has mean c^2") {
  const double c = 1.0;
  std::vector<double> t;
  for (int r = 0; r < 10000; ++r) {
    Rng rng(4, 0, r);
    t.push_back(*bm_exit_time(c, 1e-3, 100.0, rng));
  }
  const auto e = summarize(t);
  CHECK(std::abs(e.mean - c * c) < 3.0 * *e.std_error);
  Rng rng(4, 1, 0);
  CHECK_FALSE(bm_exit_time(10.0, 1e-3, 1e-3, rng).has_value());
}

TEST_CASE("Laplace transform of the exit time") {
  const double c = pi / 4;
  const std::vector<double> ys{0.0, 1.0};
  const auto pts = laplace_check(c, ys, mc_with(20000, 1e-4));
  CHECK(pts[0].empirical.mean == 1.0);
  CHECK(pts[0].analytic == 1.0);
  CHECK(pts[1].analytic == doctest::Approx(1.0 / std::cosh(c)).epsilon(1e-15));
  CHECK(std::abs(pts[1].empirical.mean - pts[1].analytic) < 3.0 * *pts[1].empirical.std_error);

  const std::vector<double> y1{1.0};
  auto mc = mc_with(2000, 1e-2);
  mc.t_max = 1e4;
  const auto wide = laplace_check(8.0, y1, mc);
  CHECK(wide[0].analytic < 1e-3);
  CHECK(std::abs(wide[0].empirical.mean - wide[0].analytic) < 3.0 * *wide[0].empirical.std_error + 1e-3);
}

TEST_CASE("inverse moment of the exponential functional") {
  SUBCASE("small time behaves like 1/t") {
    const auto e = exp_functional_inverse_moment(1e-3, mc_with(2000, 1e-5));
    CHECK(e.mean * 1e-3 == doctest::Approx(1.0).epsilon(5e-3));
  }
  SUBCASE("halving dt changes the estimate by less than its standard error") {
    const auto r = exp_functional_refinement(1.0, mc_with(5000, 1e-2));
    CHECK(std::abs(r.difference.mean) < *r.coarse.std_error);
    CHECK(r.bias_allowance() == doctest::Approx(2.0 * std::abs(r.difference.mean)));
  }
  SUBCASE("agrees with quadrature") {
    const auto e = exp_functional_inverse_moment(1.0, mc_with(20000, 1e-2));
    CHECK(std::abs(e.mean - analytic::neg_moment_A(1.0)) < 3.0 * *e.std_error);
  }
}

TEST_CASE("planar winding times feed the OU hitting expectation") {
  auto mc = mc_with(4000, 4e-3);
  mc.t_max = 1e9;
  const auto samples = sample_planar_winding_times(kTwoPi, 1.0, mc);
  REQUIRE(samples.size() == 4000);
  double m = 0.0, m2 = 0.0;
  for (double T : samples) {
    const double x = std::log(T + 0.5) / 4.0;
    m += x;
    m2 += x * x;
  }
  m /= samples.size();
  const double se = std::sqrt((m2 / samples.size() - m * m) / samples.size());
  const double target = analytic::default_constants().Q_tilde / 4.0;
  CHECK(std::abs(analytic::ou_hitting_expectation(samples) - target) < 3.0 * se);
}

}

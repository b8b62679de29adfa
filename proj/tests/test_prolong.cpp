#include <doctest.h>

#include <cmath>
#include <random>

#include "fracsym/errors.hpp"
#include "fracsym/prolong.hpp"
#include "oracles.hpp"
#include "probes.hpp"

using namespace fracsym;

namespace {

using probes::deviation;
using probes::eval;
using probes::max_abs;
using probes::window_rel_error;

std::vector<Point2D> probe_points() { return probes::window(); }
BivariatePowerSum random_probe(std::mt19937_64& rng) { return probes::random_bivariate(rng); }

ScalingField random_field(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  return ScalingField(c(rng), c(rng), c(rng));
}

}  // namespace

TEST_SUITE("prolong") {

TEST_CASE("zero field gives zero coefficients") {
  auto u = parse_bivariate("1*x1^0.5*x2^1.5 + 2*x1^1.25");
  ScalingField zero;
  CHECK(phi_p(1, zero, u, 0.5).is_zero());
  CHECK(phi_p(2, zero, u, 1.3).is_zero());
  CHECK(phi_p_series(1, zero, u, 0.5).is_zero());
  CHECK(phi_pq_mixed(MixedOrderSpec(1, 0.5, 0.5), zero, u).is_zero());
  auto pts = probe_points();
  CHECK(group_deformation_oracle(zero, u, MixedOrderSpec(1, 0.5, 0.0), pts).cwiseAbs().maxCoeff() == 0.0);
  CHECK(determining_eval(zero, u, FkdvbParams(0.5, 0.3, 1.7)).is_zero());
}

TEST_CASE("x1 scaling on x1^0.5 at order 0.5") {
  ScalingField f(1.0, 0.0, 0.0);
  auto u = parse_bivariate("x1^0.5");
  const double expected = -0.5 * std::tgamma(1.5);
  auto ph = phi_p(1, f, u, 0.5);
  REQUIRE(ph.size() == 1);
  CHECK(ph.terms()[0].exp1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ph.terms()[0].coeff == doctest::Approx(expected).epsilon(1e-14));
  CHECK(ph.terms()[0].coeff == doctest::Approx(-0.4431134627).epsilon(1e-10));
  auto series = phi_p_series(1, f, u, 0.5, 1);
  CHECK(deviation(series, ph) <= 1e-10);
  auto pts = probe_points();
  auto oracle_vals = group_deformation_oracle(f, u, MixedOrderSpec(1, 0.5, 0.0), pts);
  CHECK((oracle_vals.array() - expected).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("pure u scaling: the series gives cu D^p u") {
  ScalingField f(0.0, 0.0, 1.0);
  auto u = parse_bivariate("3*x1^0.7*x2^0.2 + -1*x1^1.5");
  auto dpu = partial_rl_deriv(u, 1, 0.5);
  CHECK(deviation(phi_p_series(1, f, u, 0.5, 4), dpu) <= 1e-14);
  CHECK(deviation(phi_p(1, f, u, 0.5), dpu) <= 1e-14);
}

TEST_CASE("property: six-term coefficient equals its closed form, the series and the oracle") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pd(0.05, 2.5);
  auto pts = probe_points();
  for (int i = 0; i < 40; ++i) {
    const auto f = random_field(rng);
    const auto u = random_probe(rng);
    const int m = 1 + i % 2;
    const double p = pd(rng);
    const auto ph = phi_p(m, f, u, p);
    const auto closed = (f.cu - p * f.c(m)) * partial_rl_deriv(u, m, p);
    CHECK(deviation(ph, closed) <= 1e-10);
    CHECK(deviation(phi_p_series(m, f, u, p, 6), ph) <= 1e-10);
    auto orc = group_deformation_oracle(f, u, MixedOrderSpec(m, p, 0.0), pts);
    CHECK(compare(orc, eval(ph, pts)).max_rel_deviation <= 1e-6);
  }
}

TEST_CASE("classical first prolongation at p = 1") {
  // Affine field, polynomial u; the classical formula uses ordinary derivatives only.
  PointField f;
  f.xi1 = parse_bivariate("0.3 + 1.2*x1 + -0.7*x2");
  f.xi2 = parse_bivariate("-1.1 + 0.4*x1 + 2*x2");
  f.phi0 = parse_bivariate("0.5*x1 + 0.25*x2");
  f.phi1 = parse_bivariate("1.5");
  auto u = parse_bivariate("1 + 2*x1 + x1^2*x2 + -3*x2^3 + x1^3*x2^2");
  for (int m : {1, 2}) {
    const BivariatePowerSum phi = f.phi0 + f.phi1 * u;
    const auto u1 = partial_diff(u, 1, 1), u2 = partial_diff(u, 2, 1);
    const auto classical = partial_diff(phi - f.xi1 * u1 - f.xi2 * u2, m, 1) +
                           f.xi1 * partial_diff(u1, m, 1) + f.xi2 * partial_diff(u2, m, 1);
    CHECK(deviation(phi_p(m, f, u, 1.0), classical) <= 1e-8);
  }
}

TEST_CASE("linearity in the field and in u") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_field(rng), g = random_field(rng);
    const auto u = random_probe(rng), w = random_probe(rng);
    const ScalingField fg(f.c1 + g.c1, f.c2 + g.c2, f.cu + g.cu);
    const double p = 0.3 + 0.05 * i;
    CHECK(deviation(phi_p(1, fg, u, p), phi_p(1, f, u, p) + phi_p(1, g, u, p)) <= 1e-10);
    CHECK(deviation(phi_p(2, f, u + w, p), phi_p(2, f, u, p) + phi_p(2, f, w, p)) <= 1e-10);
  }
}

TEST_CASE("numeric six-term coefficient tracks the exact path") {
  auto g = Grid1D::span(0.0, 1.0, 257);
  auto u = parse_bivariate("x1^1.5*x2^1.5 + 0.5*x1^2.25*x2");
  auto ug = sample(u, g, g);
  ScalingField f(0.7, -0.4, 0.3);
  for (int m : {1, 2}) {
    auto num = phi_p(m, sample_field(f, ug), ug, 0.5);
    CHECK(window_rel_error(num, phi_p(m, f, u, 0.5)) <= 5e-3);
  }
  // A non-scaling affine field through the same numeric path.
  PointField pf;
  pf.xi1 = parse_bivariate("0.2 + x1 + 0.5*x2");
  pf.xi2 = parse_bivariate("0.3*x1 + -1*x2");
  pf.phi1 = parse_bivariate("0.4");
  pf.phi0 = parse_bivariate("x1*x2");
  auto num = phi_p(1, sample_field(pf, ug), ug, 0.5);
  CHECK(window_rel_error(num, phi_p(1, pf, u, 0.5)) <= 5e-3);
}

TEST_CASE("mixed coefficient") {
  auto pts = probe_points();
  SUBCASE("q = 0 reduces to the single-order coefficient") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 20; ++i) {
      const auto f = random_field(rng);
      const auto u = random_probe(rng);
      const int m = 1 + i % 2;
      const double p = 0.2 + 0.1 * i;
      CHECK(deviation(phi_pq_mixed(MixedOrderSpec(m, p, 0.0), f, u), phi_p(m, f, u, p)) <= 1e-10);
    }
  }
  SUBCASE("field (1,1,0) on x1^0.5 x2^0.5 at p = q = 0.5") {
    ScalingField f(1.0, 1.0, 0.0);
    auto u = parse_bivariate("x1^0.5*x2^0.5");
    MixedOrderSpec s(1, 0.5, 0.5);
    auto mixed = phi_pq_mixed(s, f, u);
    auto orc = group_deformation_oracle(f, u, s, pts);
    CHECK(compare(orc, eval(mixed, pts)).max_abs_deviation <= 1e-6);
    CHECK(orc(0) == doctest::Approx(-std::pow(std::tgamma(1.5), 2)).epsilon(1e-8));
  }
  SUBCASE("property: closed form and oracle on random probes") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> pd(0.1, 1.9);
    for (int i = 0; i < 30; ++i) {
      const auto f = random_field(rng);
      const auto u = random_probe(rng);
      MixedOrderSpec s(1 + i % 2, pd(rng), pd(rng));
      const auto mixed = phi_pq_mixed(s, f, u);
      const auto dpq = partial_rl_deriv(partial_rl_deriv(u, s.other(), s.q.value()), s.m, s.p.value());
      const auto closed = (f.cu - s.p.value() * f.c(s.m) - s.q.value() * f.c(s.other())) * dpq;
      CHECK(deviation(mixed, closed) <= 1e-10);
      CHECK(compare(group_deformation_oracle(f, u, s, pts), eval(mixed, pts)).max_rel_deviation <= 1e-6);
    }
  }
  SUBCASE("numeric path") {
    auto g = Grid1D::span(0.0, 1.0, 257);
    auto u = parse_bivariate("x1^1.5*x2^1.5");
    auto ug = sample(u, g, g);
    ScalingField f(1.0, 0.5, -0.2);
    MixedOrderSpec s(2, 0.4, 0.6);
    auto num = phi_pq_mixed(s, sample_field(f, ug), ug);
    CHECK(window_rel_error(num, phi_pq_mixed(s, f, u)) <= 5e-3);
  }
  CHECK_THROWS_AS(MixedOrderSpec(1, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(MixedOrderSpec(3, 0.5, 0.0), DomainError);
}

TEST_CASE("oracle step convergence is second order") {
  ScalingField f(1.0, 0.5, 0.3);
  auto u = parse_bivariate("x1^0.5 + x1^1.5*x2");
  MixedOrderSpec s(1, 0.5, 0.0);
  auto pts = probe_points();
  auto exact = eval(phi_p(1, f, u, 0.5), pts);
  const double e1 = compare(group_deformation_oracle(f, u, s, pts, 2e-2, false), exact).max_abs_deviation;
  const double e2 = compare(group_deformation_oracle(f, u, s, pts, 1e-2, false), exact).max_abs_deviation;
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  const double rich = compare(group_deformation_oracle(f, u, s, pts, 2e-2, true), exact).max_abs_deviation;
  CHECK(rich < e2);
}

TEST_CASE("determining coefficients") {
  const FkdvbParams prm(0.5, 0.3, 1.7);
  auto gen = determining_coefficients(ScalingField(0.5, 1.7, 0.5 * (0.3 - 1.7)), prm);
  CHECK(gen.vanishes_onshell(1e-14));
  auto x1 = determining_coefficients(ScalingField(1.0, 0.0, 0.0), prm);
  CHECK(x1.onshell_uq == doctest::Approx(-0.3).epsilon(1e-13));
  CHECK(x1.onshell_r == doctest::Approx(-1.7).epsilon(1e-13));
  CHECK(scaling_multiplier(ScalingField(0.3, 0.9, 1.1), 2, 0.5) == doctest::Approx(1.1 - 0.45).epsilon(1e-13));
}

TEST_CASE("property: on-shell expression vanishes iff the field is proportional to (p, r, p(q-r))") {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> od(0.05, 2.95), c(-2.0, 2.0);
  int checked = 0;
  while (checked < 30) {
    double p = od(rng), q = od(rng), r = od(rng);
    if (q > r) std::swap(q, r);
    FkdvbParams prm(p, q, r);
    const double k = c(rng);
    auto gen = determining_coefficients(ScalingField(k * p, k * r, k * p * (q - r)), prm);
    CHECK(gen.vanishes_onshell(1e-12));
    // Generic field: vanishes only if its cross product with the generator is zero.
    const ScalingField f = random_field(rng);
    auto co = determining_coefficients(f, prm);
    const Eigen::Vector3d a(f.c1, f.c2, f.cu), b(p, r, p * (q - r));
    const bool proportional = a.cross(b).norm() <= 1e-12 * a.norm() * b.norm();
    CHECK(co.vanishes_onshell(1e-12) == proportional);
    CHECK_FALSE(proportional);
    // Each on-shell coefficient is linear in the field.
    CHECK(co.onshell_uq == doctest::Approx(f.cu + p * f.c2 - q * f.c1).epsilon(1e-12));
    CHECK(co.onshell_r == doctest::Approx(p * f.c2 - r * f.c1).epsilon(1e-12));
    ++checked;
  }
}

TEST_CASE("exact determining expression") {
  const FkdvbParams prm(0.5, 0.3, 1.7);
  std::mt19937_64 rng(36);
  for (int i = 0; i < 20; ++i) {
    const auto u = random_probe(rng);
    auto on = determining_eval(ScalingField(0.5, 1.7, -0.7), u, prm);
    CHECK(max_abs(on) <= 1e-12 * std::max(1.0, max_abs(u)));
    // Off-shell value in the jet basis.
    const ScalingField f = random_field(rng);
    auto co = determining_coefficients(f, prm);
    const auto uq = partial_rl_deriv(u, 1, 0.3);
    const auto ur = partial_rl_deriv(u, 1, 1.7);
    const auto up = partial_rl_deriv(u, 2, 0.5);
    CHECK(deviation(determining_eval(f, u, prm, Shell::Off), co.dp * up + co.uq * u * uq + co.r * ur) <= 1e-10);
    CHECK(deviation(determining_eval(f, u, prm, Shell::On), co.onshell_uq * u * uq + co.onshell_r * ur) <= 1e-10);
  }
  CHECK_THROWS_AS(FkdvbParams(1.0, 0.3, 1.7), DomainError);
  CHECK_THROWS_AS(FkdvbParams(0.5, 2.0, 2.5), DomainError);
}

TEST_CASE("terminal term matches a moving terminal") {
  // u = 1, x1-translation: d/deps [ (x + eps)^-p / Gamma(1-p) ] at eps = 0.
  auto g = Grid1D::span(0.0, 1.0, 11);
  auto ug = sample(BivariatePowerSum::constant(1.0), g, g);
  PointField tr;
  tr.xi1 = BivariatePowerSum::constant(1.0);
  auto term = terminal_term(1, sample_field(tr, ug), ug, 0.5);
  for (int i = 1; i < 11; ++i) {
    const double x = g.node(i);
    const double fd = oracle::derivative([](double e) { return std::pow(e, -0.5) / std::tgamma(0.5); }, x, 1, 1e-4);
    CHECK(oracle::rel_diff(term.samples(i, 3), fd) < 1e-8);
  }
  CHECK(term.samples(0, 3) == 0.0);
  CHECK(term.is_reduced(0, 3));
  CHECK(terminal_term(1, sample_field(tr, ug), ug, 1.0).samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("translations are not symmetries") {
  const FkdvbParams prm(0.5, 0.3, 1.7);
  auto g = Grid1D::span(0.0, 1.0, 129);
  auto u = parse_bivariate("1 + x1^1.5*x2 + 0.5*x2^2");
  auto ug = sample(u, g, g);
  for (auto [k1, k2] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.7, -0.4}}) {
    PointField tr;
    tr.xi1 = BivariatePowerSum::constant(k1);
    tr.xi2 = BivariatePowerSum::constant(k2);
    auto sf = sample_field(tr, ug);
    auto e = determining_eval(sf, ug, prm);
    double emax = 0.0;
    for (auto [i, j] : window_nodes(e)) emax = std::max(emax, std::abs(e.samples(i, j)));
    CHECK(emax > 0.1);
    // The six literal terms cancel for constant fields; the residual is the terminal part.
    auto six = phi_p(2, sf, ug, 0.5);
    double smax = 0.0;
    for (auto [i, j] : window_nodes(six)) smax = std::max(smax, std::abs(six.samples(i, j)));
    CHECK(smax <= 1e-8);
  }
  // The generator itself leaves no terminal part, and the numeric off-shell value tracks the exact one.
  ScalingField gen(0.5, 1.7, -0.7);
  auto smooth = parse_bivariate("x1^1.5*x2^1.5 + 0.5*x1^2.25*x2");
  auto sg = sample(smooth, g, g);
  auto num = determining_eval(sample_field(gen, sg), sg, prm);
  auto exact_off = determining_eval(gen, smooth, prm, Shell::Off);
  CHECK(window_rel_error(num, exact_off) <= 5e-3);
}

}  // TEST_SUITE

#include <cmath>

#include "doctest.h"
#include "lagproj/config.hpp"
#include "lagproj/io.hpp"
#include "support/random_fields.hpp"

using namespace lagproj;
using doctest::Approx;

namespace {

RunConfig test_case_config(SchemeKind scheme, double st, Index n = 100) {
  RunConfig c;
  c.scheme = scheme;
  c.st = st;
  c.n_cells = n;
  return c;
}

constexpr SchemeKind kLagrangeProjection[] = {SchemeKind::ap_explicit, SchemeKind::ap_implicit,
                                              SchemeKind::non_ap_explicit, SchemeKind::non_ap_implicit};

}  // namespace

TEST_CASE("explicit time step on the initial state, St = 0.1") {
  auto c = test_case_config(SchemeKind::ap_explicit, 0.1);
  c.initial_sampling = InitialSampling::cell_center;
  const auto setup = make_setup(c);
  const auto f = make_initial_fields(c, make_grid(c));
  const auto b = explicit_dt(f, setup);
  CHECK(sound_speed(0.0, setup.coeffs.lambda) == Approx(1.651445).epsilon(1e-6));
  CHECK(b.acoustic == Approx(0.006055).epsilon(1e-4));
  CHECK(b.acoustic == Approx(0.5 * 0.02 / std::sqrt(3 * 0.1) * std::sqrt(0.1 * 1.1)).epsilon(1e-12));
  CHECK(b.source == Approx(0.05));
  CHECK(b.formula() == b.acoustic);
  // the relaxation-speed bound of the Lagrangian step is tighter than the stated formula here
  CHECK(b.lagrangian < b.formula());
  CHECK(b.dt() == b.lagrangian);
  CHECK(b.binding() == "lagrangian");
}

TEST_CASE("explicit time step on the initial state, St = 1e-4") {
  const auto c = test_case_config(SchemeKind::ap_explicit, 1e-4);
  const auto setup = make_setup(c);
  const auto b = explicit_dt(make_initial_fields(c, make_grid(c)), setup);
  CHECK(b.source == Approx(5e-5).epsilon(1e-12));
  CHECK(b.acoustic == Approx(0.5 * 0.02 * std::sqrt(1e-4 * 1.0001) / std::sqrt(0.3)).epsilon(1e-12));
  CHECK(b.acoustic == Approx(1.826e-4).epsilon(1e-3));
  CHECK(b.formula() == b.source);
  CHECK(b.dt() == b.source);
  CHECK(b.binding() == "source");
  CHECK(planned_dt(SchemeKind::ap_explicit, make_initial_fields(c, make_grid(c)), setup) == b.source);
}

TEST_CASE("degenerate state has no finite time step") {
  auto c = test_case_config(SchemeKind::ap_explicit, 0.1);
  c.tau_g = 0;
  c.source_cap_enabled = false;
  const auto setup = make_setup(c);
  const auto f = uniform_fields(10, PrimitiveState<double>{1.0, 0.0, 0.0});
  const auto b = explicit_dt(f, setup);
  CHECK(std::isinf(b.acoustic));
  CHECK(std::isinf(b.dt()));
  CHECK_THROWS_AS(planned_dt(SchemeKind::ap_explicit, f, setup), ConfigError);

  // moving pressureless data falls back to a transport bound
  const auto moving = uniform_fields(10, PrimitiveState<double>{1.0, 0.5, 0.0});
  CHECK(planned_dt(SchemeKind::ap_explicit, moving, setup) == Approx(0.02 / (2 * 0.5)));
}

TEST_CASE("implicit time step is a multiple of the explicit bounds, capped by transport") {
  for (const double m : {1.0, 10.0, 50.0}) {
    auto c = test_case_config(SchemeKind::ap_implicit, 1e-4);
    c.implicit_multiplier = m;
    const auto setup = make_setup(c);
    const auto f = make_initial_fields(c, make_grid(c));
    const auto b = explicit_dt(f, setup);
    const double expected = std::min(m * std::min({b.source, b.acoustic, b.lagrangian}), b.transport);
    CHECK(planned_dt(SchemeKind::ap_implicit, f, setup) == expected);
  }
}

TEST_CASE("asymptotic reference time step") {
  const auto c = test_case_config(SchemeKind::asymptotic_reference, 1e-4);
  const auto setup = make_setup(c);
  const auto f = make_initial_fields(c, make_grid(c));
  CHECK(planned_dt(SchemeKind::asymptotic_reference, f, setup) == Approx(0.5 * 0.02 * 0.02 / 0.2));
}

TEST_CASE("every scheme keeps a uniform equilibrium") {
  for (const double st : {1.0, 0.01}) {
    for (const auto scheme : kLagrangeProjection) {
      auto c = test_case_config(scheme, st, 30);
      c.u_g = 0.2;
      c.implicit_multiplier = 10;
      const auto setup = make_setup(c);
      const double eps = equilibrium_internal_energy(st, setup.coeffs.mu);
      auto f = uniform_fields(30, PrimitiveState<double>{1.2, c.u_g, eps});
      const auto start = f;
      for (int i = 0; i < 100; ++i) f = step(scheme, f, setup).fields;
      CHECK(((f.rho - start.rho).abs() / start.rho).maxCoeff() <= 1e-12);
      CHECK(((f.mom - start.mom).abs() / start.mom.abs()).maxCoeff() <= 1e-12);
      CHECK(((f.etot - start.etot).abs() / start.etot.abs()).maxCoeff() <= 1e-12);
    }
  }
  // the limit scheme's own equilibrium carries eps = tau_g / 2
  auto c = test_case_config(SchemeKind::asymptotic_reference, 1e-3, 30);
  c.u_g = 0.2;
  const auto setup = make_setup(c);
  auto f = uniform_fields(30, PrimitiveState<double>{1.2, c.u_g, c.tau_g / 2});
  const auto start = f;
  for (int i = 0; i < 100; ++i) f = step(SchemeKind::asymptotic_reference, f, setup).fields;
  CHECK(((f.etot - start.etot).abs() / start.etot).maxCoeff() <= 1e-12);
  CHECK(((f.mom - start.mom).abs() / start.mom).maxCoeff() <= 1e-12);
}

TEST_CASE("steps never exceed an enabled bound and keep rho positive") {
  for (const auto scheme : kLagrangeProjection) {
    for (const double st : {0.1, 1e-3}) {
      auto c = test_case_config(scheme, st, 50);
      c.implicit_multiplier = 10;
      const auto setup = make_setup(c);
      auto f = make_initial_fields(c, make_grid(c));
      for (int i = 0; i < 40; ++i) {
        const auto b = explicit_dt(f, setup, source_treatment(scheme));
        const auto s = step(scheme, f, setup);
        if (is_implicit(scheme)) {
          CHECK(s.dt <= 10 * std::min({b.source, b.acoustic, b.lagrangian}) * (1 + 1e-12));
          CHECK(s.dt <= b.transport * (1 + 1e-12));
        } else {
          CHECK(s.dt <= b.dt() * (1 + 1e-12));
        }
        CHECK(s.attempts >= 1);
        CHECK(s.attempts <= 2);
        f = s.fields;
        CHECK(f.interior_rho().minCoeff() > 0);
      }
    }
  }
}

TEST_CASE("step honours the caller's limit") {
  const auto c = test_case_config(SchemeKind::ap_explicit, 0.1, 20);
  const auto setup = make_setup(c);
  const auto f = make_initial_fields(c, make_grid(c));
  CHECK(step(SchemeKind::ap_explicit, f, setup, 1e-7).dt == 1e-7);
}

TEST_CASE("run with t_end = 0 returns the initial condition") {
  auto c = test_case_config(SchemeKind::ap_explicit, 0.1, 40);
  c.t_end = 0;
  const auto r = run(c);
  REQUIRE(r.snapshots.size() == 1);
  CHECK(r.steps == 0);
  const auto f = make_initial_fields(c, make_grid(c));
  CHECK((r.snapshots[0].rho == f.interior_rho()).all());
  CHECK((r.snapshots[0].u == 0.0).all());
  CHECK(r.snapshots[0].time == 0.0);
}

TEST_CASE("run lands exactly on every snapshot time") {
  auto c = test_case_config(SchemeKind::ap_explicit, 0.01, 50);
  c.t_end = 0.05;
  c.snapshot_times = {0.02, 0.0, 0.011};
  std::vector<double> seen;
  const auto r = run(c, [&](const Snapshot& s) { seen.push_back(s.time); });
  CHECK(seen == std::vector<double>{0.0, 0.011, 0.02, 0.05});
  REQUIRE(r.snapshots.size() == 4);
  for (const auto& s : r.snapshots) {
    CHECK(s.size() == 50);
    CHECK(s.rho.size() == 50);
    CHECK(s.P.size() == 50);
    CHECK(s.diagnostics.min_rho > 0);
  }
}

TEST_CASE("runs are deterministic") {
  for (const auto scheme : {SchemeKind::ap_explicit, SchemeKind::non_ap_implicit, SchemeKind::asymptotic_reference}) {
    auto c = test_case_config(scheme, 1e-3, 60);
    c.t_end = 0.05;
    c.implicit_multiplier = 10;
    CHECK(snapshot_csv(run(c).snapshots.back()) == snapshot_csv(run(c).snapshots.back()));
  }
}

TEST_CASE("periodic 2000-cell run conserves mass") {
  auto c = test_case_config(SchemeKind::ap_explicit, 0.01, 2000);
  c.boundary = BoundaryPolicy::periodic;
  const auto r = run(c);
  const auto f = make_initial_fields(c, make_grid(c));
  const double m0 = f.interior_rho().sum() * 0.001;
  CHECK(std::abs(r.snapshots.back().diagnostics.total_mass - m0) / m0 <= 1e-11);
}

TEST_CASE("sink sees snapshots written before a failure") {
  auto c = test_case_config(SchemeKind::ap_explicit, 0.1, 20);
  c.tau_g = 0;
  c.source_cap_enabled = false;
  c.snapshot_times = {0.0};
  int delivered = 0;
  CHECK_THROWS_AS(run(c, [&](const Snapshot&) { ++delivered; }), ConfigError);
  CHECK(delivered == 1);
}

TEST_CASE("run validates its config") {
  auto c = test_case_config(SchemeKind::ap_explicit, -1.0);
  CHECK_THROWS_AS(run(c), InvalidParameter);
  c = test_case_config(SchemeKind::ap_explicit, 0.1, 2);
  CHECK_THROWS_AS(run(c), InvalidParameter);
}

TEST_CASE("AP error does not grow as the Stokes number decreases") {
  double previous = std::numeric_limits<double>::infinity();
  for (const double st : {1e-2, 1e-3, 1e-4}) {
    auto c = test_case_config(SchemeKind::ap_explicit, st);
    const double err = error_norms(run(c).snapshots.back(), analytic_reference(c, c.t_end)).l1;
    CHECK(err <= 1.1 * previous);
    previous = err;
  }
}

TEST_CASE("implicit run with 50 times the explicit step completes with bounded states") {
  auto c = test_case_config(SchemeKind::ap_implicit, 1e-4);
  c.implicit_multiplier = 50;
  const auto s = run(c).snapshots.back();
  CHECK(s.rho.allFinite());
  CHECK(s.diagnostics.min_rho > 0);
  CHECK(s.rho.maxCoeff() < 2.5);
  CHECK(s.diagnostics.max_abs_u < 10);
}

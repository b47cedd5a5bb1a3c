// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "districtcool/plant.hpp"

using namespace dcool;

namespace {

const BiquadFit kChillerA{2.46, 2.77e-2, 3.79e-5};
const BiquadFit kChillerB{1.26, 4.98e-2, 2.49e-4};
const BiquadFit kChillerC{5.11, 1.58e-2, 3.56e-6};

}  // namespace

TEST_CASE("idle electric draw equals the constant coefficient exactly") {
  CHECK(chiller_electric(0.0, kChillerA) == 2.46);
  CHECK(chiller_electric(0.0, kChillerB) == 1.26);
  CHECK(chiller_electric(0.0, kChillerC) == 5.11);
}

TEST_CASE("quartic chiller curve at reference operating points") {
  // building A at 10 MJ cooling: 3.79e-5*1e4 + 2.77e-2*1e2 + 2.46 = 5.609
  CHECK(chiller_electric(10.0, kChillerA) == doctest::Approx(5.609).epsilon(1e-12));
  CHECK(10.0 / chiller_electric(10.0, kChillerA) ==
        doctest::Approx(1.783).epsilon(5e-4));
  // building B at 5 MJ cooling
  CHECK(chiller_electric(5.0, kChillerB) ==
        doctest::Approx(2.660625).epsilon(1e-12));
}

TEST_CASE("quartic regression recovers synthetic coefficients exactly") {
  const BiquadFit truth{3.2, 0.041, 6.5e-5};
  std::vector<double> ec, ee, w;
  for (int i = 0; i <= 24; ++i) {
    const double x = 30.0 * i / 24.0;
    ec.push_back(x);
    ee.push_back(chiller_electric(x, truth));
    w.push_back(i % 5 == 0 ? 10.0 : 1.0);
  }
  const BiquadFit fit = fit_even_quartic(ec, ee, w);
  CHECK(fit.c0 == doctest::Approx(truth.c0).epsilon(1e-10));
  CHECK(fit.c1 == doctest::Approx(truth.c1).epsilon(1e-10));
  CHECK(fit.c2 == doctest::Approx(truth.c2).epsilon(1e-10));
}

TEST_CASE("entropy-balance chiller model and its fitted surrogate") {
  // plausible water-cooled screw chiller on 10-minute slots: idle draw
  // ~2.4 MJ, peak COP ~1.8, pole at 60 MJ cooling per slot
  NgGordonParams p;
  p.a1 = 8e-6;
  p.a2 = 0.025;
  p.a3 = 1.0;
  p.a4 = 2850.0;
  p.t_cw = 285.15;
  const double dt = 600.0;
  const double t_out = 303.15;

  SUBCASE("electric energy is positive and increasing below the pole") {
    double prev = ng_gordon_electric(0.0, t_out, p, dt);
    CHECK(prev > 0.0);
    for (double ec = 5.0; ec <= 50.0; ec += 5.0) {
      const double ee = ng_gordon_electric(ec, t_out, p, dt);
      CHECK(ee > prev);
      prev = ee;
    }
  }

  SUBCASE("requests at or beyond the pole are rejected") {
    const double pole = p.t_cw * dt / p.a4;
    CHECK_THROWS_AS(ng_gordon_electric(pole, t_out, p, dt), SolverError);
    CHECK_THROWS_AS(ng_gordon_electric(pole + 1.0, t_out, p, dt), SolverError);
  }

  SUBCASE("fit anchors sit within one percent of the full model") {
    const BiquadFit fit = fit_biquadratic(t_out, p, dt);
    CHECK(fit.c1 >= 0.0);
    CHECK(fit.c2 >= 0.0);
    const double ee0 = ng_gordon_electric(0.0, t_out, p, dt);
    CHECK(std::abs(chiller_electric(0.0, fit) - ee0) <= 0.01 * ee0);
  }

  SUBCASE("ambient-dependent model caches fits per temperature") {
    ChillerModel cm(p, 40.0, dt);
    CHECK(cm.ambient_dependent());
    const BiquadFit& f1 = cm.fit_at(t_out);
    const BiquadFit& f2 = cm.fit_at(t_out);
    CHECK(&f1 == &f2);
    const BiquadFit& g = cm.fit_at(t_out + 5.0);
    CHECK(g.c0 != f1.c0);
  }
}

TEST_CASE("fixed-coefficient chiller ignores the ambient temperature") {
  ChillerModel cm(kChillerA, 30.0);
  CHECK(!cm.ambient_dependent());
  CHECK(cm.fit_at(280.0).c0 == 2.46);
  CHECK(cm.fit_at(310.0).c0 == 2.46);
  CHECK(cm.e_max() == 30.0);
}

TEST_CASE("storage level map matches the step recursion") {
  const double loss = 0.999;
  const int n_t = 12;
  const StorageTrajectory st = storage_trajectory(loss, n_t);

  Vector etot(n_t);
  for (int t = 0; t < n_t; ++t) etot(t) = std::sin(0.7 * t) * 3.0;
  const double e1 = 42.0;

  // oracle: E(1) = e1, E(t) = loss * E(t-1) - etot(t-1), through E(n_t+1)
  Vector oracle(n_t + 1);
  oracle(0) = e1;
  for (int t = 1; t <= n_t; ++t) oracle(t) = loss * oracle(t - 1) - etot(t - 1);

  const Vector got = st.levels(e1, etot);
  CHECK((got - oracle).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("storage level map is superposable") {
  const StorageTrajectory st = storage_trajectory(0.995, 24);
  Vector u1(24), u2(24);
  for (int t = 0; t < 24; ++t) {
    u1(t) = std::cos(0.3 * t);
    u2(t) = 0.5 * t - 6.0;
  }
  const Vector sum = st.levels(10.0 + 7.0, u1 + u2);
  const Vector parts = st.levels(10.0, u1) + st.levels(7.0, u2);
  CHECK((sum - parts).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("storage parameter validation") {
  StorageParams sp;
  sp.loss = 0.999;
  sp.capacity = 500.0;
  sp.exchange_max = {12.0, 12.0, 12.0};
  CHECK_NOTHROW(sp.validate(3));
  CHECK_THROWS_AS(sp.validate(2), ModelError);
  sp.loss = 1.0;
  CHECK_THROWS_AS(sp.validate(3), ModelError);
  sp.loss = 0.9;
  sp.exchange_max[1] = 0.0;
  CHECK_THROWS_AS(sp.validate(3), ModelError);
}

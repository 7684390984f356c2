#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "strata/dataio.hpp"
#include "strata/moments.hpp"
#include "strata/montecarlo.hpp"
#include "support/generators.hpp"

using namespace strata;

namespace {

bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) <= tol * scale;
}

// Independent row-by-row oracle over the six published data rows. Kept as
// plain arrays and loops so it shares nothing with the library path.
struct KadilarOracle {
  double W2[6], f[6], R[6], Syx[6], Sy2[6], Sx2[6], Yb[6], Xb[6], w[6];

  KadilarOracle() {
    const double N[6] = {106, 106, 94, 171, 204, 173};
    const double n[6] = {9, 17, 38, 67, 7, 2};
    const double Xbar[6] = {24375, 27421, 72409, 74365, 26441, 9844};
    const double Ybar[6] = {536, 2212, 9384, 5588, 967, 404};
    const double Sx[6] = {49189, 57461, 160757, 285603, 45403, 18794};
    const double Sy[6] = {6425, 11552, 29907, 28643, 2390, 946};
    const double rho[6] = {0.82, 0.86, 0.90, 0.99, 0.71, 0.89};
    for (int h = 0; h < 6; ++h) {
      w[h] = N[h] / 854.0;
      W2[h] = w[h] * w[h];
      f[h] = 1.0 / n[h] - 1.0 / N[h];
      R[h] = Ybar[h] / Xbar[h];
      Syx[h] = rho[h] * Sy[h] * Sx[h];
      Sy2[h] = Sy[h] * Sy[h];
      Sx2[h] = Sx[h] * Sx[h];
      Yb[h] = Ybar[h];
      Xb[h] = Xbar[h];
    }
  }

  double sum(double (*term)(const KadilarOracle&, int)) const {
    double total = 0.0;
    for (int h = 0; h < 6; ++h) total += term(*this, h);
    return total;
  }
};

StratifiedDesign single_stratum(std::int64_t N, std::int64_t n, double mean_x,
                                double mean_y, double sd_x, double sd_y,
                                double rho) {
  StratumRecord r;
  r.id = "s";
  r.pop_count = N;
  r.sample_count = n;
  r.mean_x = mean_x;
  r.mean_y = mean_y;
  r.sd_x = sd_x;
  r.sd_y = sd_y;
  r.rho = rho;
  return finalize_design({r});
}

}  // namespace

TEST_SUITE_BEGIN("moments");

TEST_CASE("classical MSEs match the row-summation oracle on the embedded data") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  const KadilarOracle o;

  const double mse_mean = o.sum(
      [](const KadilarOracle& k, int h) { return k.W2[h] * k.f[h] * k.Sy2[h]; });
  CHECK(rel_close(mse_classical(design, EstimatorId::mean), mse_mean, 1e-12));
  // order-of-magnitude anchor from the direct summation
  CHECK(mse_classical(design, EstimatorId::mean) ==
        doctest::Approx(6.98e5).epsilon(5e-3));
  // frozen desk value (independent spreadsheet-style evaluation)
  CHECK(rel_close(mse_classical(design, EstimatorId::mean), 697800.1728713617,
                  1e-12));

  const double mse_t1 = o.sum([](const KadilarOracle& k, int h) {
    return k.W2[h] * k.f[h] *
           (k.Sy2[h] + k.R[h] * k.R[h] * k.Sx2[h] - 2.0 * k.R[h] * k.Syx[h]);
  });
  const double mse_t2 = o.sum([](const KadilarOracle& k, int h) {
    return k.W2[h] * k.f[h] *
           (k.Sy2[h] + k.R[h] * k.R[h] * k.Sx2[h] + 2.0 * k.R[h] * k.Syx[h]);
  });
  const double mse_t3 = o.sum([](const KadilarOracle& k, int h) {
    return k.W2[h] * k.f[h] *
           (k.Sy2[h] + 0.25 * k.R[h] * k.R[h] * k.Sx2[h] - k.R[h] * k.Syx[h]);
  });
  const double mse_t4 = o.sum([](const KadilarOracle& k, int h) {
    return k.W2[h] * k.f[h] *
           (k.Sy2[h] + 0.25 * k.R[h] * k.R[h] * k.Sx2[h] + k.R[h] * k.Syx[h]);
  });
  const double mse_tlr = o.sum([](const KadilarOracle& k, int h) {
    const double rho2 = k.Syx[h] * k.Syx[h] / (k.Sy2[h] * k.Sx2[h]);
    return k.W2[h] * k.f[h] * k.Sy2[h] * (1.0 - rho2);
  });
  CHECK(rel_close(mse_classical(design, EstimatorId::t1), mse_t1, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::t2), mse_t2, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::t3), mse_t3, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::t4), mse_t4, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::tlr), mse_tlr, 1e-10));

  CHECK(rel_close(mse_classical(design, EstimatorId::t1), 185191.2494023671, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::t2), 1814446.6955539673, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::t3), 365991.01123516297, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::t4), 1180618.7343109632, 1e-12));
  CHECK(rel_close(mse_classical(design, EstimatorId::tlr), 111917.98171883529, 1e-12));
}

TEST_CASE("moment bundle matches the row-summation oracle on the embedded data") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  const auto b = moment_bundle(design);
  const KadilarOracle o;

  const double A = o.sum(
      [](const KadilarOracle& k, int h) { return k.W2[h] * k.Yb[h] * k.Yb[h]; });
  const double P2 = o.sum(
      [](const KadilarOracle& k, int h) { return k.W2[h] * k.f[h] * k.Sx2[h]; });
  const double P3 = o.sum(
      [](const KadilarOracle& k, int h) { return k.W2[h] * k.f[h] * k.Syx[h]; });
  const double P4 = o.sum([](const KadilarOracle& k, int h) {
    return k.W2[h] * k.f[h] * k.R[h] * k.Sx2[h];
  });
  const double P1 =
      o.sum([](const KadilarOracle& k, int h) {
        return k.W2[h] * k.f[h] * k.Sy2[h];
      }) +
      2.25 * o.sum([](const KadilarOracle& k, int h) {
        return k.W2[h] * k.f[h] * k.R[h] * k.R[h] * k.Sx2[h];
      }) +
      A + 3.0 * o.sum([](const KadilarOracle& k, int h) {
        return k.W2[h] * k.f[h] * k.R[h] * k.Syx[h];
      });

  CHECK(rel_close(b.A, A, 1e-12));
  CHECK(rel_close(b.P1, P1, 1e-12));
  CHECK(rel_close(b.P2, P2, 1e-12));
  CHECK(rel_close(b.P3, P3, 1e-12));
  CHECK(rel_close(b.P4, P4, 1e-12));

  // frozen desk values
  CHECK(rel_close(b.A, 2458701.1194708464, 1e-12));
  CHECK(rel_close(b.P1, 5057985.176071221, 1e-12));
  CHECK(rel_close(b.P2, 64289095.480019, 1e-12));
  CHECK(rel_close(b.P3, 5537109.608725665, 1e-12));
  CHECK(rel_close(b.P4, 4040375.408853327, 1e-12));
}

TEST_CASE("optimum lambdas and minimum MSE on the embedded data") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  const auto opt = opt_lambdas(design);
  CHECK(rel_close(opt.lambda1, 0.8290235826612018, 1e-12));
  CHECK(rel_close(opt.lambda2, 0.14955482136962833, 1e-12));

  const auto b = moment_bundle(design);
  const double at_opt = mse_tp(b, opt.lambda1, opt.lambda2);
  CHECK(rel_close(at_opt, 420379.90871401853, 1e-11));
  CHECK(rel_close(at_opt, b.A * (1.0 - opt.lambda1), 1e-9));
  // the equivalent A - A^2/D closed form, D = P1 - (2P3+3P4)^2 / (4P2)
  const double c = 2.0 * b.P3 + 3.0 * b.P4;
  const double D = b.P1 - c * c / (4.0 * b.P2);
  CHECK(rel_close(at_opt, b.A - b.A * b.A / D, 1e-9));

  CHECK(rel_close(bias_tp(design, opt.lambda1, opt.lambda2),
                  -2742.0430852743884, 1e-11));
}

TEST_CASE("mse_tR identity family holds bitwise-tight on random designs") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 100; ++it) {
    const auto design = testutil::random_design(rng);
    const std::vector<double> a1(design.size(), 1.0);
    const std::vector<double> a2(design.size(), 2.0);
    const std::vector<double> am2(design.size(), -2.0);
    CHECK(rel_close(mse_tR(design, a1), mse_classical(design, EstimatorId::t1), 1e-12));
    CHECK(rel_close(mse_tR(design, a2), mse_classical(design, EstimatorId::t3), 1e-12));
    CHECK(rel_close(mse_tR(design, am2), mse_classical(design, EstimatorId::t4), 1e-12));
  }
}

TEST_CASE("optimum a reproduces the regression MSE") {
  std::mt19937_64 rng(72);
  for (int it = 0; it < 100; ++it) {
    const auto design = testutil::random_design(rng);
    const auto a = opt_a(design);
    CHECK(rel_close(mse_tR(design, a), mse_classical(design, EstimatorId::tlr), 1e-9));
  }

  SUBCASE("a* = 1 when Syx = R Sx2") {
    // rho * sy * sx = (my/mx) sx^2  =>  choose my = rho sy mx / sx
    const auto design = single_stratum(100, 10, 8.0, 0.9 * 6.0 * 8.0 / 4.0, 4.0, 6.0, 0.9);
    const auto a = opt_a(design);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("a* = 1 under perfect proportional correlation") {
    // rho = 1 and Sy = R Sx, with R = 2
    const auto design = single_stratum(100, 10, 5.0, 10.0, 3.0, 6.0, 1.0);
    const auto a = opt_a(design);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("frozen desk values for the embedded data") {
    const auto a = opt_a(builtin_dataset("kadilar-cingi-1999"));
    const double expected[6] = {0.20530577914698633, 0.46657276267028874,
                                0.774016078223557,   0.7568274623863541,
                                0.9785362032410602,  0.9161104551042827};
    for (int h = 0; h < 6; ++h) CHECK(rel_close(a[h], expected[h], 1e-12));
  }
  SUBCASE("uncorrelated stratum has no finite optimum") {
    const auto design = single_stratum(100, 10, 8.0, 5.0, 4.0, 6.0, 0.0);
    try {
      opt_a(design);
      FAIL("expected UncorrelatedStratum");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UncorrelatedStratum);
    }
  }
}

TEST_CASE("bundle degenerates as the formulas say") {
  SUBCASE("census strata: sampling aggregates vanish, P1 = A") {
    StratumRecord r1, r2;
    r1.id = "a";
    r1.pop_count = r1.sample_count = 50;
    r1.mean_x = 10;
    r1.mean_y = 4;
    r1.sd_x = 2;
    r1.sd_y = 1;
    r1.rho = 0.5;
    r2 = r1;
    r2.id = "b";
    r2.pop_count = r2.sample_count = 80;
    const auto b = moment_bundle(finalize_design({r1, r2}));
    CHECK(b.P2 == 0.0);
    CHECK(b.P3 == 0.0);
    CHECK(b.P4 == 0.0);
    CHECK(b.P1 == b.A);
    CHECK(b.A > 0.0);
  }
  SUBCASE("rho = 0 everywhere kills P3 only") {
    const auto design = single_stratum(100, 10, 8.0, 5.0, 4.0, 6.0, 0.0);
    const auto b = moment_bundle(design);
    CHECK(b.P3 == 0.0);
    CHECK(b.P4 != 0.0);
  }
}

TEST_CASE("opt_lambdas edge cases") {
  SUBCASE("P3 = P4 = 0 collapses the cross terms") {
    // census stratum carries the mean; a zero-mean stratum carries sampling
    // variance with rho = 0
    StratumRecord carry, noise;
    carry.id = "carry";
    carry.pop_count = carry.sample_count = 60;
    carry.mean_x = 10;
    carry.mean_y = 5;
    carry.sd_x = 2;
    carry.sd_y = 1;
    carry.rho = 0.4;
    noise.id = "noise";
    noise.pop_count = 100;
    noise.sample_count = 10;
    noise.mean_x = 20;
    noise.mean_y = 0.0;
    noise.sd_x = 3;
    noise.sd_y = 2;
    noise.rho = 0.0;
    const auto design = finalize_design({carry, noise});
    const auto b = moment_bundle(design);
    REQUIRE(b.P3 == 0.0);
    REQUIRE(b.P4 == 0.0);
    REQUIRE(b.P2 > 0.0);
    const auto opt = opt_lambdas(design);
    CHECK(opt.lambda2 == 0.0);
    CHECK(rel_close(opt.lambda1, b.A / b.P1, 1e-12));
  }
  SUBCASE("census design is singular") {
    StratumRecord r;
    r.id = "a";
    r.pop_count = r.sample_count = 50;
    r.mean_x = 10;
    r.mean_y = 4;
    r.sd_x = 2;
    r.sd_y = 1;
    r.rho = 0.5;
    try {
      opt_lambdas(finalize_design({r}));
      FAIL("expected SingularSystem");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SingularSystem);
    }
  }
}

TEST_CASE("mse_tp fixed points") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  const auto b = moment_bundle(design);
  CHECK(mse_tp(b, 0.0, 0.0) == b.A);
  const double expected = b.P1 - 2.0 * b.A + b.A;
  CHECK(mse_tp(b, 1.0, 0.0) == expected);
}

TEST_CASE("closed form beats every grid point and is stationary") {
  std::mt19937_64 rng(73);
  int designs_checked = 0;
  for (int it = 0; it < 1000; ++it) {
    const auto design = testutil::random_design(rng);
    const auto b = moment_bundle(design);
    const auto opt = opt_lambdas(b);
    const double best = mse_tp(b, opt.lambda1, opt.lambda2);

    // stationarity
    for (double eps : {1e-4, -1e-4}) {
      CHECK(mse_tp(b, opt.lambda1 + eps, opt.lambda2) >= best);
      CHECK(mse_tp(b, opt.lambda1, opt.lambda2 + eps) >= best);
    }

    // coarse grid around and beyond the optimum never does better
    const double rbar = design.pop_mean_y / design.pop_mean_x;
    const double span2 = 2.0 * std::fabs(rbar) + 0.5;
    const auto grid = grid_lambda_oracle(design, 0.0, 2.0, -span2, span2, 41);
    CHECK(grid.mse >= best - 1e-9 * std::fabs(best));

    // internal consistency of the closed form
    CHECK(rel_close(best, b.A * (1.0 - opt.lambda1), 1e-9));
    ++designs_checked;
  }
  CHECK(designs_checked == 1000);
}

TEST_CASE("grid argmin brackets the closed form locally") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  const auto opt = opt_lambdas(design);
  const double span = 5e-4;
  const int res = 11;
  const auto grid = grid_lambda_oracle(design, opt.lambda1 - span,
                                       opt.lambda1 + span, opt.lambda2 - span,
                                       opt.lambda2 + span, res);
  const double cell = 2.0 * span / (res - 1);
  CHECK(std::fabs(grid.lambda1 - opt.lambda1) <= cell + 1e-15);
  CHECK(std::fabs(grid.lambda2 - opt.lambda2) <= cell + 1e-15);
}

TEST_CASE("bias_tp fixed points") {
  SUBCASE("census design with lambda1 = 1, lambda2 = 0 is unbiased") {
    StratumRecord r;
    r.id = "a";
    r.pop_count = r.sample_count = 50;
    r.mean_x = 10;
    r.mean_y = 4;
    r.sd_x = 2;
    r.sd_y = 1;
    r.rho = 0.5;
    const auto design = finalize_design({r});
    CHECK(bias_tp(design, 1.0, 0.0) == 0.0);
  }
  SUBCASE("lambda = 0 degenerates the estimator to zero") {
    const auto design = builtin_dataset("kadilar-cingi-1999");
    CHECK(bias_tp(design, 0.0, 0.0) == -design.pop_mean_y);
  }
}

TEST_CASE("pre_table on the embedded data") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  const auto report = pre_table(design);
  REQUIRE(report.estimators.size() == 8);
  CHECK(report.unavailable.empty());
  CHECK(report.f_convention == "computed");

  const double mse_mean = mse_classical(design, EstimatorId::mean);
  CHECK(report.find(EstimatorId::mean)->pre == 100.0);
  for (const auto& e : report.estimators) {
    CHECK(e.mse > 0.0);
    CHECK(rel_close(e.pre, 100.0 * mse_mean / e.mse, 1e-15));
  }

  // the regression-optimum identity surfaces as equal PREs
  CHECK(rel_close(report.find(EstimatorId::tR)->pre,
                  report.find(EstimatorId::tlr)->pre, 1e-9));

  // achieved PREs under the computed-f convention (frozen desk values)
  CHECK(rel_close(report.find(EstimatorId::t1)->pre, 376.79975437459433, 1e-9));
  CHECK(rel_close(report.find(EstimatorId::tlr)->pre, 623.4924559526122, 1e-9));
  CHECK(rel_close(report.find(EstimatorId::tp)->pre, 165.9927504637407, 1e-9));

  SUBCASE("tabulated convention reproduces the printed regression PRE") {
    const auto tab = pre_table(
        builtin_dataset("kadilar-cingi-1999", FConvention::tabulated));
    CHECK(tab.f_convention == "tabulated");
    CHECK(rel_close(mse_classical(builtin_dataset("kadilar-cingi-1999",
                                                  FConvention::tabulated),
                                  EstimatorId::mean),
                    680237.6437093728, 1e-12));
    CHECK(rel_close(tab.find(EstimatorId::tlr)->pre, 625.9682196475876, 1e-9));
    // the regression row of the published efficiency table, to print precision
    CHECK(tab.find(EstimatorId::tlr)->pre == doctest::Approx(625.97).epsilon(1e-5));
  }
}

TEST_CASE("pre_table degrades gracefully") {
  SUBCASE("uncorrelated stratum drops tR but keeps the rest") {
    StratumRecord r1, r2;
    r1.id = "a";
    r1.pop_count = 100;
    r1.sample_count = 10;
    r1.mean_x = 10;
    r1.mean_y = 4;
    r1.sd_x = 2;
    r1.sd_y = 1;
    r1.rho = 0.0;
    r2 = r1;
    r2.id = "b";
    r2.rho = 0.5;
    const auto report = pre_table(finalize_design({r1, r2}));
    CHECK(report.find(EstimatorId::tR) == nullptr);
    CHECK(report.find(EstimatorId::mean) != nullptr);
    CHECK(report.find(EstimatorId::t1) != nullptr);
    CHECK(report.find(EstimatorId::tp) != nullptr);
    bool tR_listed = false;
    for (const auto& [id, reason] : report.unavailable)
      tR_listed |= id == EstimatorId::tR;
    CHECK(tR_listed);
    CHECK_FALSE(report.a_opt.has_value());
  }
  SUBCASE("zero aux mean drops the ratio family") {
    StratumRecord r;
    r.id = "a";
    r.pop_count = 100;
    r.sample_count = 10;
    r.mean_x = 0.0;
    r.mean_y = 4;
    r.sd_x = 2;
    r.sd_y = 1;
    r.rho = 0.5;
    const auto report = pre_table(finalize_design({r}));
    CHECK(report.find(EstimatorId::mean) != nullptr);
    CHECK(report.find(EstimatorId::tlr) != nullptr);
    CHECK(report.find(EstimatorId::t1) == nullptr);
    CHECK(report.find(EstimatorId::tp) == nullptr);
  }
}

TEST_CASE("degenerate auxiliary collapses ratio MSEs to the mean") {
  const auto design = single_stratum(100, 10, 8.0, 5.0, 0.0, 6.0, 0.0);
  const double mean = mse_classical(design, EstimatorId::mean);
  CHECK(mse_classical(design, EstimatorId::t1) == mean);
  CHECK(mse_classical(design, EstimatorId::t2) == mean);
  CHECK(mse_classical(design, EstimatorId::t3) == mean);
  CHECK(mse_classical(design, EstimatorId::t4) == mean);
}

TEST_CASE("textbook single-stratum values") {
  // W = 1, f = 1/2 - 1/4 = 0.25, Sy^2 = 4
  const auto design = single_stratum(4, 2, 8.0, 5.0, 1.0, 2.0, 0.5);
  CHECK(mse_classical(design, EstimatorId::mean) == 1.0);

  // perfect proportionality: rho = 1 and Sy = R Sx makes the ratio estimator exact
  const auto perfect = single_stratum(100, 10, 5.0, 10.0, 3.0, 6.0, 1.0);
  CHECK(mse_classical(perfect, EstimatorId::t1) == 0.0);
}

TEST_CASE("regression dominates ratio at first order when rho >= 0") {
  std::mt19937_64 rng(74);
  testutil::DesignOptions opt;
  opt.positive_rho = true;
  for (int it = 0; it < 100; ++it) {
    const auto design = testutil::random_design(rng, opt);
    const auto report = pre_table(design);
    const auto* tlr = report.find(EstimatorId::tlr);
    REQUIRE(tlr != nullptr);
    CHECK(tlr->pre >= report.find(EstimatorId::t1)->pre);
    CHECK(tlr->pre >= report.find(EstimatorId::t3)->pre);

    // per-stratum algebraic inequality backing the dominance:
    // Sy2 (1 - rho^2) <= Sy2 + R^2 Sx2 - 2 R Syx, an exact square
    for (const auto& s : design.strata) {
      const double lhs = s.sd_y * s.sd_y * (1.0 - s.rho * s.rho);
      const double r = s.ratio();
      const double rhs = s.sd_y * s.sd_y + r * r * s.sd_x * s.sd_x -
                         2.0 * r * s.cov_xy;
      CHECK(lhs <= rhs + 1e-12 * std::fabs(rhs));
    }
  }
}

TEST_CASE("ordering sanity under positive correlation") {
  std::mt19937_64 rng(75);
  testutil::DesignOptions opt;
  opt.positive_rho = true;
  for (int it = 0; it < 100; ++it) {
    const auto design = testutil::random_design(rng, opt);
    CHECK(mse_classical(design, EstimatorId::t1) <
          mse_classical(design, EstimatorId::t2));
    CHECK(mse_classical(design, EstimatorId::t3) <
          mse_classical(design, EstimatorId::t4));
  }
}

TEST_CASE("P1 >= A on nonnegative-correlation designs") {
  std::mt19937_64 rng(76);
  testutil::DesignOptions opt;
  opt.positive_rho = true;
  for (int it = 0; it < 100; ++it) {
    const auto b = moment_bundle(testutil::random_design(rng, opt));
    CHECK(b.P1 >= b.A);
    CHECK(b.P2 >= 0.0);
    CHECK(b.A >= 0.0);
  }
}

TEST_CASE("MSEs are invariant under stratum reordering") {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 50; ++it) {
    const auto design = testutil::random_design(rng);
    auto records = to_records(design);
    std::shuffle(records.begin(), records.end(), rng);
    const auto shuffled = finalize_design(records);
    for (EstimatorId id : {EstimatorId::mean, EstimatorId::t1, EstimatorId::t2,
                           EstimatorId::t3, EstimatorId::t4, EstimatorId::tlr}) {
      CHECK(rel_close(mse_classical(design, id), mse_classical(shuffled, id),
                      1e-12));
    }
    const auto b1 = moment_bundle(design);
    const auto b2 = moment_bundle(shuffled);
    CHECK(rel_close(b1.P1, b2.P1, 1e-12));
    CHECK(rel_close(mse_tp(b1, 0.8, 0.1), mse_tp(b2, 0.8, 0.1), 1e-12));
  }
}

TEST_CASE("mse_tR rejects zero tuning") {
  const auto design = builtin_dataset("kadilar-cingi-1999");
  std::vector<double> a(design.size(), 1.0);
  a[2] = 0.0;
  try {
    mse_tR(design, a);
    FAIL("expected ZeroTuning");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroTuning);
  }
}

TEST_SUITE_END();

#include "strata/moments.hpp"

#include <cmath>

namespace strata {

namespace {

double w2f(const StratumFrame& s) { return s.weight * s.weight * s.fpc; }

void require_rho_defined(const StratumFrame& s) {
  // rho is meaningless when either dispersion vanishes
  if (s.sd_x == 0.0 || s.sd_y == 0.0)
    throw Error(Errc::UndefinedCorrelation,
                "stratum '" + s.id + "': correlation undefined (zero sd)");
}

}  // namespace

double mse_classical(const StratifiedDesign& design, EstimatorId id) {
  double total = 0.0;
  for (const auto& s : design.strata) {
    const double sy2 = s.sd_y * s.sd_y;
    const double sx2 = s.sd_x * s.sd_x;
    double bracket = 0.0;
    switch (id) {
      case EstimatorId::mean:
        bracket = sy2;
        break;
      case EstimatorId::t1: {
        const double r = s.ratio();
        bracket = sy2 + r * r * sx2 - 2.0 * r * s.cov_xy;
        break;
      }
      case EstimatorId::t2: {
        const double r = s.ratio();
        bracket = sy2 + r * r * sx2 + 2.0 * r * s.cov_xy;
        break;
      }
      case EstimatorId::t3: {
        const double r = s.ratio();
        bracket = sy2 + 0.25 * r * r * sx2 - r * s.cov_xy;
        break;
      }
      case EstimatorId::t4: {
        const double r = s.ratio();
        bracket = sy2 + 0.25 * r * r * sx2 + r * s.cov_xy;
        break;
      }
      case EstimatorId::tlr:
        require_rho_defined(s);
        bracket = sy2 * (1.0 - s.rho * s.rho);
        break;
      default:
        throw Error(Errc::InvariantViolation,
                    std::string("mse_classical does not cover ") +
                        estimator_name(id));
    }
    total += w2f(s) * bracket;
  }
  return total;
}

double mse_tR(const StratifiedDesign& design, const std::vector<double>& a) {
  if (a.size() != design.size())
    throw Error(Errc::ZeroTuning, "tR requires one a_h per stratum");
  double total = 0.0;
  for (std::size_t h = 0; h < design.size(); ++h) {
    const StratumFrame& s = design.strata[h];
    if (a[h] == 0.0)
      throw Error(Errc::ZeroTuning,
                  "a[" + std::to_string(h) + "] must be nonzero");
    const double r_over_a = s.ratio() / a[h];
    total += w2f(s) * (s.sd_y * s.sd_y + r_over_a * r_over_a * s.sd_x * s.sd_x -
                       2.0 * r_over_a * s.cov_xy);
  }
  return total;
}

std::vector<double> opt_a(const StratifiedDesign& design) {
  std::vector<double> a;
  a.reserve(design.size());
  for (const auto& s : design.strata) {
    if (s.cov_xy == 0.0)
      throw Error(Errc::UncorrelatedStratum,
                  "stratum '" + s.id + "': Syx = 0, no finite optimum a");
    a.push_back(s.ratio() * s.sd_x * s.sd_x / s.cov_xy);
  }
  return a;
}

MomentBundle moment_bundle(const StratifiedDesign& design) {
  // each aggregate is a single pass in stratum order
  MomentBundle b;
  double p1_y = 0.0, p1_x = 0.0, p1_cross = 0.0;
  for (const auto& s : design.strata) {
    const double w2 = s.weight * s.weight;
    const double r = s.ratio();
    const double sx2 = s.sd_x * s.sd_x;
    p1_y += w2 * s.fpc * s.sd_y * s.sd_y;
    p1_x += w2 * s.fpc * r * r * sx2;
    p1_cross += w2 * s.fpc * r * s.cov_xy;
    b.A += w2 * s.mean_y * s.mean_y;
    b.P2 += w2 * s.fpc * sx2;
    b.P3 += w2 * s.fpc * s.cov_xy;
    b.P4 += w2 * s.fpc * r * sx2;
  }
  b.P1 = p1_y + 2.25 * p1_x + b.A + 3.0 * p1_cross;
  return b;
}

LambdaPair opt_lambdas(const MomentBundle& b) {
  const double c = 2.0 * b.P3 + 3.0 * b.P4;
  const double denom = 4.0 * b.P1 * b.P2 - c * c;
  if (std::fabs(denom) < 1e-12)
    throw Error(Errc::SingularSystem,
                "4 P1 P2 - (2 P3 + 3 P4)^2 vanishes; no unique optimum");
  return {4.0 * b.P2 * b.A / denom, 2.0 * c * b.A / denom};
}

LambdaPair opt_lambdas(const StratifiedDesign& design) {
  return opt_lambdas(moment_bundle(design));
}

double mse_tp(const MomentBundle& b, double lambda1, double lambda2) {
  return lambda1 * lambda1 * b.P1 + lambda2 * lambda2 * b.P2 -
         2.0 * lambda1 * lambda2 * b.P3 - 3.0 * lambda1 * lambda2 * b.P4 -
         2.0 * lambda1 * b.A + b.A;
}

double mse_tp(const StratifiedDesign& design, double lambda1, double lambda2) {
  return mse_tp(moment_bundle(design), lambda1, lambda2);
}

double bias_tp(const StratifiedDesign& design, double lambda1, double lambda2) {
  double total = 0.0;
  for (const auto& s : design.strata) {
    if (s.mean_x == 0.0)
      throw Error(Errc::ZeroAuxMean,
                  "stratum '" + s.id + "': bias undefined for mean_x = 0");
    const double sx2 = s.sd_x * s.sd_x;
    const double r = s.mean_y / s.mean_x;
    total += s.weight *
             (s.mean_y * (lambda1 - 1.0) +
              1.5 * lambda1 * s.fpc * s.cov_xy / s.mean_x -
              1.5 * lambda2 * s.fpc * sx2 / s.mean_x -
              1.875 * lambda1 * s.fpc * r * sx2 / s.mean_x);
  }
  return total;
}

AnalysisReport pre_table(const StratifiedDesign& design) {
  AnalysisReport report;
  report.f_convention = design.has_f_override() ? "tabulated" : "computed";

  const double mse_mean = mse_classical(design, EstimatorId::mean);
  if (mse_mean == 0.0)
    throw Error(Errc::InvariantViolation,
                "var(ybar_st) = 0; relative efficiencies undefined");

  auto add = [&](EstimatorId id, double mse) {
    if (mse == 0.0) {
      report.unavailable.emplace_back(id, "MSE is 0; PRE undefined");
      return;
    }
    report.estimators.push_back({id, mse, 100.0 * (mse_mean / mse)});
  };
  auto add_or_skip = [&](EstimatorId id, auto&& compute) {
    try {
      add(id, compute());
    } catch (const Error& e) {
      report.unavailable.emplace_back(id, e.what());
    }
  };

  add(EstimatorId::mean, mse_mean);
  for (EstimatorId id : {EstimatorId::t1, EstimatorId::t2, EstimatorId::t3,
                         EstimatorId::t4, EstimatorId::tlr})
    add_or_skip(id, [&] { return mse_classical(design, id); });

  try {
    report.a_opt = opt_a(design);
    add_or_skip(EstimatorId::tR, [&] { return mse_tR(design, *report.a_opt); });
  } catch (const Error& e) {
    report.unavailable.emplace_back(EstimatorId::tR, e.what());
  }

  try {
    const MomentBundle bundle = moment_bundle(design);
    const LambdaPair opt = opt_lambdas(bundle);
    report.lambda_opt = opt;
    report.mse_tp_min = mse_tp(bundle, opt.lambda1, opt.lambda2);
    report.bias_tp_opt = bias_tp(design, opt.lambda1, opt.lambda2);
    add(EstimatorId::tp, *report.mse_tp_min);
  } catch (const Error& e) {
    report.unavailable.emplace_back(EstimatorId::tp, e.what());
  }
  return report;
}

}  // namespace strata

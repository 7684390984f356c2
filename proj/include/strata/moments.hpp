#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strata/estimators.hpp"
#include "strata/model.hpp"

namespace strata {

// Aggregates feeding the tp optimum and its quadratic MSE form:
//   P1 = S W2 f Sy2 + (9/4) S W2 f R2 Sx2 + S W2 Ybar2 + 3 S W2 f R Syx
//   P2 = S W2 f Sx2
//   P3 = S W2 f Syx
//   P4 = S W2 f R Sx2
//   A  = S W2 Ybar2
// (sums over strata, in stratum order).
struct MomentBundle {
  double P1 = 0.0;
  double P2 = 0.0;
  double P3 = 0.0;
  double P4 = 0.0;
  double A = 0.0;
};

// First-order MSE for mean, t1..t4 and tlr. For the mean this is the exact
// design variance of the stratified sample mean.
double mse_classical(const StratifiedDesign& design, EstimatorId id);

// MSE(tR) = S W2 f [Sy2 + (R2/a2) Sx2 - 2 (R/a) Syx]
double mse_tR(const StratifiedDesign& design, const std::vector<double>& a);

// Stationary point of each stratum's tR bracket in 1/a_h:
//   a_h* = R_h Sx2_h / Syx_h.
// At a*, mse_tR equals the regression MSE.
std::vector<double> opt_a(const StratifiedDesign& design);

MomentBundle moment_bundle(const StratifiedDesign& design);

// Closed-form optimum of the tp quadratic:
//   l1* = 4 P2 A / (4 P1 P2 - (2 P3 + 3 P4)^2)
//   l2* = 2 (2 P3 + 3 P4) A / (4 P1 P2 - (2 P3 + 3 P4)^2)
struct LambdaPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};
LambdaPair opt_lambdas(const StratifiedDesign& design);
LambdaPair opt_lambdas(const MomentBundle& bundle);

// MSE(tp) = l1^2 P1 + l2^2 P2 - 2 l1 l2 P3 - 3 l1 l2 P4 - 2 l1 A + A
double mse_tp(const StratifiedDesign& design, double lambda1, double lambda2);
double mse_tp(const MomentBundle& bundle, double lambda1, double lambda2);

// First-order bias of tp:
//   S w_h { Ybar_h (l1 - 1) + (3/2) l1 f Syx/Xbar
//           - (3/2) l2 f Sx2/Xbar - (15/8) l1 f R Sx2/Xbar }
double bias_tp(const StratifiedDesign& design, double lambda1, double lambda2);

// Percent relative efficiency table vs the stratified sample mean, with the
// tuning parameters at their optima. Estimators whose preconditions fail on
// the given design are reported unavailable instead of failing the report.
struct EstimatorEfficiency {
  EstimatorId id = EstimatorId::mean;
  double mse = 0.0;
  double pre = 0.0;  // percent, 100 * mse(mean) / mse
};

struct AnalysisReport {
  std::vector<EstimatorEfficiency> estimators;  // canonical order, available only
  std::vector<std::pair<EstimatorId, std::string>> unavailable;
  std::optional<LambdaPair> lambda_opt;
  std::optional<std::vector<double>> a_opt;
  std::optional<double> bias_tp_opt;
  std::optional<double> mse_tp_min;
  std::string dataset;       // provenance label for serialization
  std::string f_convention;  // "computed" or "tabulated"

  const EstimatorEfficiency* find(EstimatorId id) const {
    for (const auto& e : estimators)
      if (e.id == id) return &e;
    return nullptr;
  }
};

AnalysisReport pre_table(const StratifiedDesign& design);

}  // namespace strata

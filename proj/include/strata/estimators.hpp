#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strata/model.hpp"

namespace strata {

enum class EstimatorId { mean, t1, t2, t3, t4, tlr, tR, tp };

inline constexpr EstimatorId kAllEstimators[] = {
    EstimatorId::mean, EstimatorId::t1, EstimatorId::t2, EstimatorId::t3,
    EstimatorId::t4,   EstimatorId::tlr, EstimatorId::tR, EstimatorId::tp};

const char* estimator_name(EstimatorId id) noexcept;
std::optional<EstimatorId> estimator_from_name(const std::string& name) noexcept;

// Separate-form point estimate for every estimator except tp.
//   mean: ybar_h
//   t1:   ybar_h * (Xbar_h / xbar_h)
//   t2:   ybar_h * (xbar_h / Xbar_h)
//   t3:   ybar_h * exp((Xbar_h - xbar_h) / (Xbar_h + xbar_h))
//   t4:   ybar_h * exp((xbar_h - Xbar_h) / (xbar_h + Xbar_h))
//   tlr:  ybar_h + b_h * (Xbar_h - xbar_h)
//   tR:   ybar_h * exp((Xbar_h - xbar_h) / (Xbar_h + (a_h - 1) xbar_h))
// combined as sum over strata of W_h * (stratum term).
double point_estimate_classical(EstimatorId id, const SurveySample& sample,
                                const StratifiedDesign& design,
                                const std::vector<double>* a = nullptr);

// The two-parameter estimator: sum over strata of
//   W_h [l1 ybar_h + l2 (Xbar_h - xbar_h)]
//       * {2 - (Xbar_h / xbar_h) exp((Xbar_h - xbar_h)/(Xbar_h + xbar_h))}.
double point_estimate_tp(const SurveySample& sample,
                         const StratifiedDesign& design, double lambda1,
                         double lambda2);

}  // namespace strata

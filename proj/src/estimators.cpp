#include "strata/estimators.hpp"

#include <cmath>

namespace strata {

const char* estimator_name(EstimatorId id) noexcept {
  switch (id) {
    case EstimatorId::mean: return "mean";
    case EstimatorId::t1: return "t1";
    case EstimatorId::t2: return "t2";
    case EstimatorId::t3: return "t3";
    case EstimatorId::t4: return "t4";
    case EstimatorId::tlr: return "tlr";
    case EstimatorId::tR: return "tR";
    case EstimatorId::tp: return "tp";
  }
  return "?";
}

std::optional<EstimatorId> estimator_from_name(const std::string& name) noexcept {
  for (EstimatorId id : kAllEstimators)
    if (name == estimator_name(id)) return id;
  return std::nullopt;
}

namespace {

void check_alignment(const SurveySample& sample, const StratifiedDesign& design) {
  if (sample.size() != design.size())
    throw Error(Errc::StrataMismatch,
                "sample has " + std::to_string(sample.size()) +
                    " strata, design has " + std::to_string(design.size()));
  for (std::size_t h = 0; h < design.size(); ++h)
    if (sample.strata[h].id != design.strata[h].id)
      throw Error(Errc::StrataMismatch,
                  "stratum " + std::to_string(h + 1) + ": sample id '" +
                      sample.strata[h].id + "' vs design id '" +
                      design.strata[h].id + "'");
}

double require_nonzero_xbar(const SampleStratum& s) {
  if (s.mean_x == 0.0)
    throw Error(Errc::ZeroSampleAuxMean,
                "stratum '" + s.id + "': sample mean of x is 0");
  return s.mean_x;
}

}  // namespace

double point_estimate_classical(EstimatorId id, const SurveySample& sample,
                                const StratifiedDesign& design,
                                const std::vector<double>* a) {
  check_alignment(sample, design);
  if (id == EstimatorId::tp)
    throw Error(Errc::InvariantViolation,
                "tp requires point_estimate_tp(lambda1, lambda2)");
  if (id == EstimatorId::tR) {
    if (a == nullptr || a->size() != design.size())
      throw Error(Errc::ZeroTuning, "tR requires one a_h per stratum");
    for (std::size_t h = 0; h < a->size(); ++h)
      if ((*a)[h] == 0.0)
        throw Error(Errc::ZeroTuning,
                    "a[" + std::to_string(h) + "] must be nonzero");
  }

  double total = 0.0;
  for (std::size_t h = 0; h < design.size(); ++h) {
    const SampleStratum& s = sample.strata[h];
    const StratumFrame& d = design.strata[h];
    double term = 0.0;
    switch (id) {
      case EstimatorId::mean:
        term = s.mean_y;
        break;
      case EstimatorId::t1:
        term = s.mean_y * (d.mean_x / require_nonzero_xbar(s));
        break;
      case EstimatorId::t2:
        if (d.mean_x == 0.0)
          throw Error(Errc::ZeroAuxMean,
                      "stratum '" + d.id + "': population mean of x is 0");
        term = s.mean_y * (s.mean_x / d.mean_x);
        break;
      case EstimatorId::t3: {
        const double den = d.mean_x + s.mean_x;
        if (den == 0.0)
          throw Error(Errc::ZeroDenominator,
                      "stratum '" + s.id + "': Xbar + xbar is 0");
        term = s.mean_y * std::exp((d.mean_x - s.mean_x) / den);
        break;
      }
      case EstimatorId::t4: {
        const double den = s.mean_x + d.mean_x;
        if (den == 0.0)
          throw Error(Errc::ZeroDenominator,
                      "stratum '" + s.id + "': xbar + Xbar is 0");
        term = s.mean_y * std::exp((s.mean_x - d.mean_x) / den);
        break;
      }
      case EstimatorId::tlr:
        term = s.mean_y + s.slope() * (d.mean_x - s.mean_x);
        break;
      case EstimatorId::tR: {
        const double den = d.mean_x + ((*a)[h] - 1.0) * s.mean_x;
        if (den == 0.0)
          throw Error(Errc::ZeroDenominator,
                      "stratum '" + s.id + "': Xbar + (a-1) xbar is 0");
        term = s.mean_y * std::exp((d.mean_x - s.mean_x) / den);
        break;
      }
      case EstimatorId::tp:
        break;  // unreachable
    }
    total += d.weight * term;
  }
  if (!std::isfinite(total))
    throw Error(Errc::NonFiniteResult, std::string(estimator_name(id)) +
                                           " evaluated to a non-finite value");
  return total;
}

double point_estimate_tp(const SurveySample& sample,
                         const StratifiedDesign& design, double lambda1,
                         double lambda2) {
  check_alignment(sample, design);
  double total = 0.0;
  for (std::size_t h = 0; h < design.size(); ++h) {
    const SampleStratum& s = sample.strata[h];
    const StratumFrame& d = design.strata[h];
    const double xbar = require_nonzero_xbar(s);
    const double lead = lambda1 * s.mean_y + lambda2 * (d.mean_x - s.mean_x);
    const double brace =
        2.0 - (d.mean_x / xbar) * std::exp((d.mean_x - s.mean_x) / (d.mean_x + s.mean_x));
    total += d.weight * lead * brace;
  }
  if (!std::isfinite(total))
    throw Error(Errc::NonFiniteResult, "tp evaluated to a non-finite value");
  return total;
}

}  // namespace strata

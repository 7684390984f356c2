#include "strata/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace strata {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveCount: return "NonPositiveCount";
    case Errc::SampleExceedsStratum: return "SampleExceedsStratum";
    case Errc::ZeroAuxMean: return "ZeroAuxMean";
    case Errc::CorrelationOutOfRange: return "CorrelationOutOfRange";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::StrataMismatch: return "StrataMismatch";
    case Errc::ZeroSampleAuxMean: return "ZeroSampleAuxMean";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::DegenerateSlope: return "DegenerateSlope";
    case Errc::NonFiniteResult: return "NonFiniteResult";
    case Errc::UndefinedCorrelation: return "UndefinedCorrelation";
    case Errc::ZeroTuning: return "ZeroTuning";
    case Errc::UncorrelatedStratum: return "UncorrelatedStratum";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::TooManySamples: return "TooManySamples";
    case Errc::EmptyRange: return "EmptyRange";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::SingletonStratum: return "SingletonStratum";
    case Errc::UnknownDataset: return "UnknownDataset";
  }
  return "UnknownError";
}

namespace {

void validate_record(const StratumRecord& r) {
  if (r.pop_count < 1 || r.sample_count < 1)
    throw Error(Errc::NonPositiveCount,
                "stratum '" + r.id + "': N and n must be >= 1");
  if (r.pop_count < 2)
    throw Error(Errc::NonPositiveCount,
                "stratum '" + r.id + "': N must be >= 2 for divisor-(N-1) moments");
  if (r.sample_count > r.pop_count)
    throw Error(Errc::SampleExceedsStratum,
                "stratum '" + r.id + "': n = " + std::to_string(r.sample_count) +
                    " exceeds N = " + std::to_string(r.pop_count));
  if (!(r.rho >= -1.0 && r.rho <= 1.0))
    throw Error(Errc::CorrelationOutOfRange,
                "stratum '" + r.id + "': rho must lie in [-1, 1]");
  if (!(r.sd_x >= 0.0) || !(r.sd_y >= 0.0))
    throw Error(Errc::InvariantViolation,
                "stratum '" + r.id + "': standard deviations must be >= 0");
  if (r.cov_xy) {
    const double derived = r.rho * r.sd_y * r.sd_x;
    const double scale = std::max({std::fabs(*r.cov_xy), std::fabs(derived), 1e-300});
    if (std::fabs(*r.cov_xy - derived) > 1e-6 * scale)
      throw Error(Errc::InvariantViolation,
                  "stratum '" + r.id +
                      "': supplied cov_xy inconsistent with rho*sd_y*sd_x");
  }
}

}  // namespace

StratifiedDesign finalize_design(const std::vector<StratumRecord>& records) {
  if (records.empty())
    throw Error(Errc::InvariantViolation, "design needs at least one stratum");

  std::unordered_set<std::string> seen;
  std::int64_t pop_total = 0;
  std::int64_t sample_total = 0;
  for (const auto& r : records) {
    validate_record(r);
    if (!seen.insert(r.id).second)
      throw Error(Errc::InvariantViolation, "duplicate stratum id '" + r.id + "'");
    pop_total += r.pop_count;
    sample_total += r.sample_count;
  }

  StratifiedDesign design;
  design.pop_total = pop_total;
  design.sample_total = sample_total;
  design.strata.reserve(records.size());
  for (const auto& r : records) {
    StratumFrame s;
    s.id = r.id;
    s.pop_count = r.pop_count;
    s.sample_count = r.sample_count;
    s.mean_x = r.mean_x;
    s.mean_y = r.mean_y;
    s.sd_x = r.sd_x;
    s.sd_y = r.sd_y;
    s.rho = r.rho;
    s.cov_xy = r.cov_xy ? *r.cov_xy : r.rho * r.sd_y * r.sd_x;
    s.weight = static_cast<double>(r.pop_count) / static_cast<double>(pop_total);
    s.fpc = r.f_override
                ? *r.f_override
                : 1.0 / static_cast<double>(r.sample_count) -
                      1.0 / static_cast<double>(r.pop_count);
    s.cx = r.cx;
    s.cy = r.cy;
    s.beta2x = r.beta2x;
    s.f_override = r.f_override;
    design.strata.push_back(std::move(s));
  }

  // accumulate in input order
  double mean_y = 0.0, mean_x = 0.0;
  for (const auto& s : design.strata) {
    mean_y += s.weight * s.mean_y;
    mean_x += s.weight * s.mean_x;
  }
  design.pop_mean_y = mean_y;
  design.pop_mean_x = mean_x;
  return design;
}

std::vector<StratumRecord> to_records(const StratifiedDesign& design) {
  std::vector<StratumRecord> records;
  records.reserve(design.strata.size());
  for (const auto& s : design.strata) {
    StratumRecord r;
    r.id = s.id;
    r.pop_count = s.pop_count;
    r.sample_count = s.sample_count;
    r.mean_x = s.mean_x;
    r.mean_y = s.mean_y;
    r.sd_x = s.sd_x;
    r.sd_y = s.sd_y;
    r.rho = s.rho;
    r.cov_xy = s.cov_xy;
    r.cx = s.cx;
    r.cy = s.cy;
    r.beta2x = s.beta2x;
    r.f_override = s.f_override;
    records.push_back(std::move(r));
  }
  return records;
}

SampleStratum make_sample_stratum(std::string id, std::vector<double> values_y,
                                  std::vector<double> values_x) {
  if (values_y.size() != values_x.size())
    throw Error(Errc::InvariantViolation,
                "stratum '" + id + "': y/x value counts differ");
  if (values_y.empty())
    throw Error(Errc::InvariantViolation, "stratum '" + id + "': no units");

  SampleStratum s;
  s.id = std::move(id);
  const std::size_t n = values_y.size();
  double sum_y = 0.0, sum_x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_y += values_y[i];
    sum_x += values_x[i];
  }
  s.mean_y = sum_y / static_cast<double>(n);
  s.mean_x = sum_x / static_cast<double>(n);
  if (n >= 2) {
    double syy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dy = values_y[i] - s.mean_y;
      const double dx = values_x[i] - s.mean_x;
      syy += dy * dy;
      sxx += dx * dx;
      sxy += dy * dx;
    }
    const double div = static_cast<double>(n - 1);
    s.var_y = syy / div;
    s.var_x = sxx / div;
    s.cov_xy = sxy / div;
  } else {
    s.var_y = s.var_x = s.cov_xy = std::numeric_limits<double>::quiet_NaN();
  }
  s.values_y = std::move(values_y);
  s.values_x = std::move(values_x);
  return s;
}

StratumRecord record_from_units(std::string id, std::int64_t sample_count,
                                const std::vector<double>& values_y,
                                const std::vector<double>& values_x) {
  SampleStratum m = make_sample_stratum(id, values_y, values_x);
  StratumRecord r;
  r.id = std::move(m.id);
  r.pop_count = static_cast<std::int64_t>(m.values_y.size());
  r.sample_count = sample_count;
  r.mean_y = m.mean_y;
  r.mean_x = m.mean_x;
  r.sd_y = std::sqrt(m.var_y);
  r.sd_x = std::sqrt(m.var_x);
  r.cov_xy = m.cov_xy;
  // Cauchy-Schwarz bounds the true value; clamp the last-ulp excess
  r.rho = (r.sd_y > 0.0 && r.sd_x > 0.0)
              ? std::clamp(m.cov_xy / (r.sd_y * r.sd_x), -1.0, 1.0)
              : 0.0;
  return r;
}

}  // namespace strata

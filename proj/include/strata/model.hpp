#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strata/error.hpp"

namespace strata {

// One stratum's population/design summary plus the derived quantities every
// formula consumes. Immutable once the owning design is finalized.
struct StratumFrame {
  std::string id;
  std::int64_t pop_count = 0;     // N_h
  std::int64_t sample_count = 0;  // n_h
  double mean_x = 0.0;            // population mean of auxiliary x
  double mean_y = 0.0;            // population mean of study y
  double sd_x = 0.0;              // S_xh
  double sd_y = 0.0;              // S_yh
  double rho = 0.0;               // within-stratum correlation
  double cov_xy = 0.0;            // S_yxh, derived from rho unless supplied
  double weight = 0.0;            // W_h = N_h / N, derived
  double fpc = 0.0;               // f_h = 1/n_h - 1/N_h, or the override

  // passthrough metadata, unused by any formula
  std::optional<double> cx, cy, beta2x;
  // reproduction escape hatch: replaces the computed fpc when present
  std::optional<double> f_override;

  // R_h = mean_y / mean_x; only defined for mean_x != 0.
  double ratio() const {
    if (mean_x == 0.0)
      throw Error(Errc::ZeroAuxMean,
                  "stratum '" + id + "': ratio undefined for mean_x = 0");
    return mean_y / mean_x;
  }
};

// Raw per-stratum record before derivation. cov_xy may be left unset; it is
// derived as rho * sd_y * sd_x.
struct StratumRecord {
  std::string id;
  std::int64_t pop_count = 0;
  std::int64_t sample_count = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sd_x = 0.0;
  double sd_y = 0.0;
  double rho = 0.0;
  std::optional<double> cov_xy;
  std::optional<double> cx, cy, beta2x;
  std::optional<double> f_override;
};

struct StratifiedDesign {
  std::vector<StratumFrame> strata;
  std::int64_t pop_total = 0;     // N
  std::int64_t sample_total = 0;  // n
  double pop_mean_y = 0.0;        // sum of W_h * mean_y
  double pop_mean_x = 0.0;        // sum of W_h * mean_x

  std::size_t size() const { return strata.size(); }
  bool has_f_override() const {
    for (const auto& s : strata)
      if (s.f_override) return true;
    return false;
  }
};

// Validates the records and derives W_h, f_h, cov_xy and the population
// totals. Input order is preserved; sums accumulate in that order.
// Idempotent: re-finalizing a finalized design's strata changes nothing.
StratifiedDesign finalize_design(const std::vector<StratumRecord>& records);

// Convenience: strata of an existing design back to records (used by the
// idempotency tests and the CSV writer).
std::vector<StratumRecord> to_records(const StratifiedDesign& design);

// One stratum of drawn microdata with its divisor-(n-1) sample moments.
// var/cov are NaN for single-unit strata; consumers that need them fail
// lazily.
struct SampleStratum {
  std::string id;
  std::vector<double> values_y;
  std::vector<double> values_x;
  double mean_y = 0.0;
  double mean_x = 0.0;
  double var_y = 0.0;
  double var_x = 0.0;
  double cov_xy = 0.0;

  // least-squares slope b_h = s_yxh / s2_xh
  double slope() const {
    if (!(var_x > 0.0))
      throw Error(Errc::DegenerateSlope,
                  "stratum '" + id + "': slope undefined for s2_x <= 0");
    return cov_xy / var_x;
  }
};

struct SurveySample {
  std::vector<SampleStratum> strata;
  std::size_t size() const { return strata.size(); }
};

// Computes all sample moments from raw unit values. Strata keep input order.
SampleStratum make_sample_stratum(std::string id, std::vector<double> values_y,
                                  std::vector<double> values_x);

// Global tuning parameters for the tp and tR estimators.
struct TuningParams {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  std::vector<double> a;  // per stratum, each nonzero

  void validate() const {
    for (std::size_t h = 0; h < a.size(); ++h)
      if (a[h] == 0.0)
        throw Error(Errc::ZeroTuning,
                    "a[" + std::to_string(h) + "] must be nonzero");
  }
};

// Exact population moments of one stratum's unit values, divisor N_h - 1.
// Used to realize the summary of a synthetic finite population; feed the
// records to finalize_design.
StratumRecord record_from_units(std::string id, std::int64_t sample_count,
                                const std::vector<double>& values_y,
                                const std::vector<double>& values_x);

}  // namespace strata

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strata/moments.hpp"

namespace strata {

enum class DistFamily { gaussian, lognormal };

const char* dist_family_name(DistFamily family) noexcept;
std::optional<DistFamily> dist_family_from_name(const std::string& name) noexcept;

// Generation target for one stratum of a synthetic finite population.
struct StratumTarget {
  std::string id;
  std::int64_t pop_count = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sd_x = 0.0;
  double sd_y = 0.0;
  double rho = 0.0;
};

struct PopulationSpec {
  std::vector<StratumTarget> strata;
  DistFamily family = DistFamily::gaussian;
  std::uint64_t seed = 1;
};

struct PopulationStratum {
  std::string id;
  std::vector<double> values_y;
  std::vector<double> values_x;
};

// A fixed finite population: the design-based truth for everything drawn
// from it. Summaries are realized from the units, never from the targets.
struct FinitePopulation {
  std::vector<PopulationStratum> strata;

  // sum of W_h * realized mean of y
  double true_mean_y() const;

  // Realized summary with the given per-stratum sample sizes (divisor
  // N_h - 1 moments from the unit values).
  StratifiedDesign realized_design(const std::vector<std::int64_t>& n) const;
};

// Deterministic for a fixed spec: unit values depend only on
// (spec.seed, stratum index) streams.
FinitePopulation gen_population(const PopulationSpec& spec);

// Uniform SRSWOR within each stratum, independent across strata. The draw
// stream is keyed by (seed, replicate_index, stratum_index), so any
// replicate can be reproduced in isolation.
SurveySample draw_srswor(const FinitePopulation& pop,
                         const std::vector<std::int64_t>& n,
                         std::uint64_t replicate_index, std::uint64_t seed);

struct EstimatorSimulation {
  EstimatorId id = EstimatorId::mean;
  double empirical_mse = 0.0;
  double empirical_bias = 0.0;
  double mc_standard_error = 0.0;  // standard error of empirical_mse
  std::int64_t replicates = 0;     // successful replicates
  std::int64_t failed = 0;
  std::optional<double> theoretical_mse;  // first-order value on the realized design
};

struct SimulationReport {
  std::vector<EstimatorSimulation> estimators;
  std::vector<std::pair<EstimatorId, std::string>> unavailable;
  std::int64_t requested_replicates = 0;
  std::uint64_t seed = 0;
  double true_mean = 0.0;
  std::optional<LambdaPair> lambda_opt;      // used for tp
  std::optional<std::vector<double>> a_opt;  // used for tR
  bool high_failure_rate = false;            // any estimator fails > 1%
};

// Empirical MSE/bias of each estimator over `reps` independent replicates.
// tp runs at the lambda optimum and tR at a*, both computed from the
// realized population summary. Replicates where an estimator's
// preconditions fail are tallied and excluded for that estimator only.
// Results are bit-identical for any worker count.
SimulationReport simulate(const FinitePopulation& pop,
                          const std::vector<std::int64_t>& n,
                          const std::vector<EstimatorId>& estimators,
                          std::int64_t reps, std::uint64_t seed,
                          unsigned workers = 1);

struct ExactEstimatorMoments {
  EstimatorId id = EstimatorId::mean;
  double expectation = 0.0;
  double variance = 0.0;
  double mse = 0.0;  // about the realized population mean
  double bias = 0.0;
  std::int64_t failed_samples = 0;
};

struct EnumerationResult {
  std::vector<ExactEstimatorMoments> estimators;
  std::vector<std::pair<EstimatorId, std::string>> unavailable;
  std::int64_t total_samples = 0;
  double true_mean = 0.0;
};

// Iterates every possible stratified sample once (product of per-stratum
// combinations; guarded at 1e7) and returns exact design moments.
EnumerationResult enumerate_exact(const FinitePopulation& pop,
                                  const std::vector<std::int64_t>& n,
                                  const std::vector<EstimatorId>& estimators);

struct GridPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mse = 0.0;
};

// Brute-force argmin of mse_tp over an inclusive grid; the independent
// check on the closed-form optimum. resolution applies per axis.
GridPoint grid_lambda_oracle(const StratifiedDesign& design, double lambda1_lo,
                             double lambda1_hi, double lambda2_lo,
                             double lambda2_hi, int resolution);

}  // namespace strata

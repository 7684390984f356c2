#include "strata/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace strata {

const char* dist_family_name(DistFamily family) noexcept {
  return family == DistFamily::gaussian ? "gaussian" : "lognormal";
}

std::optional<DistFamily> dist_family_from_name(const std::string& name) noexcept {
  if (name == "gaussian") return DistFamily::gaussian;
  if (name == "lognormal") return DistFamily::lognormal;
  return std::nullopt;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// mt19937_64 is bit-specified by the standard; std::normal_distribution and
// std::uniform_int_distribution are not. The transforms below are explicit
// so reports stay byte-identical for any worker count.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t replicate, std::uint64_t stratum) {
  std::uint64_t key = mix64(seed);
  key = mix64(key ^ tag);
  key = mix64(key ^ replicate);
  key = mix64(key ^ stratum);
  return std::mt19937_64(key);
}

constexpr std::uint64_t kPopulationTag = 0x706f70756c617465ull;
constexpr std::uint64_t kDrawTag = 0x7372737730722020ull;

double uniform_open01(std::mt19937_64& gen) {
  // (0, 1]: never 0, so log() below stays finite
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller; one pair per call, cached odd value dropped for stream clarity.
void normal_pair(std::mt19937_64& gen, double& z0, double& z1) {
  const double u1 = uniform_open01(gen);
  const double u2 = uniform_open01(gen);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  z0 = radius * std::cos(angle);
  z1 = radius * std::sin(angle);
}

std::uint64_t bounded_uint(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return x % n;
}

void validate_spec(const PopulationSpec& spec) {
  if (spec.strata.empty())
    throw Error(Errc::InvalidSpec, "population spec has no strata");
  for (const auto& t : spec.strata) {
    if (t.pop_count < 2)
      throw Error(Errc::InvalidSpec,
                  "stratum '" + t.id + "': population size must be >= 2");
    if (!(t.sd_x >= 0.0) || !(t.sd_y >= 0.0))
      throw Error(Errc::InvalidSpec,
                  "stratum '" + t.id + "': negative standard deviation");
    if (!(t.rho >= -1.0 && t.rho <= 1.0))
      throw Error(Errc::InvalidSpec,
                  "stratum '" + t.id + "': rho outside [-1, 1]");
  }
}

// Normal-scale parameters reproducing a lognormal mean/sd target.
struct LognormalParams {
  double mu = 0.0;
  double sigma = 0.0;
};

LognormalParams lognormal_params(double mean, double sd, const std::string& id) {
  if (!(mean > 0.0))
    throw Error(Errc::InvalidSpec,
                "stratum '" + id + "': lognormal requires positive means");
  const double cv = sd / mean;
  const double sigma2 = std::log1p(cv * cv);
  return {std::log(mean) - 0.5 * sigma2, std::sqrt(sigma2)};
}

// Normal-scale correlation hitting a target lognormal-scale correlation.
// Heavily skewed targets can be infeasible (the attainable correlation of a
// bivariate lognormal is narrower than [-1, 1]); clamp to the boundary and
// let the realized summary speak for itself.
double lognormal_normal_corr(double rho, double sx, double sy) {
  if (sx == 0.0 || sy == 0.0) return 0.0;
  const double k = std::sqrt(std::expm1(sx * sx) * std::expm1(sy * sy));
  const double arg = 1.0 + rho * k;
  constexpr double kBound = 1.0 - 1e-9;
  if (arg <= 0.0) return -kBound;
  return std::clamp(std::log(arg) / (sx * sy), -kBound, kBound);
}

}  // namespace

double FinitePopulation::true_mean_y() const {
  std::int64_t total = 0;
  for (const auto& s : strata) total += static_cast<std::int64_t>(s.values_y.size());
  double mean = 0.0;
  for (const auto& s : strata) {
    const double w = static_cast<double>(s.values_y.size()) / static_cast<double>(total);
    double sum = 0.0;
    for (double v : s.values_y) sum += v;
    mean += w * (sum / static_cast<double>(s.values_y.size()));
  }
  return mean;
}

StratifiedDesign FinitePopulation::realized_design(
    const std::vector<std::int64_t>& n) const {
  if (n.size() != strata.size())
    throw Error(Errc::StrataMismatch,
                "sample-size list does not match population strata");
  std::vector<StratumRecord> records;
  records.reserve(strata.size());
  for (std::size_t h = 0; h < strata.size(); ++h) {
    if (n[h] > static_cast<std::int64_t>(strata[h].values_y.size()))
      throw Error(Errc::SampleExceedsStratum,
                  "stratum '" + strata[h].id + "': n exceeds N");
    records.push_back(record_from_units(strata[h].id, n[h],
                                        strata[h].values_y,
                                        strata[h].values_x));
  }
  return finalize_design(records);
}

FinitePopulation gen_population(const PopulationSpec& spec) {
  validate_spec(spec);
  FinitePopulation pop;
  pop.strata.reserve(spec.strata.size());
  for (std::size_t h = 0; h < spec.strata.size(); ++h) {
    const StratumTarget& t = spec.strata[h];
    auto gen = make_stream(spec.seed, kPopulationTag, 0, h);
    PopulationStratum s;
    s.id = t.id;
    s.values_y.resize(static_cast<std::size_t>(t.pop_count));
    s.values_x.resize(static_cast<std::size_t>(t.pop_count));

    if (spec.family == DistFamily::gaussian) {
      const double cross = t.rho;
      const double resid = std::sqrt(std::max(0.0, 1.0 - t.rho * t.rho));
      for (std::size_t i = 0; i < s.values_y.size(); ++i) {
        double z0, z1;
        normal_pair(gen, z0, z1);
        s.values_y[i] = t.mean_y + t.sd_y * z0;
        s.values_x[i] = t.mean_x + t.sd_x * (cross * z0 + resid * z1);
      }
    } else {
      const LognormalParams py = lognormal_params(t.mean_y, t.sd_y, t.id);
      const LognormalParams px = lognormal_params(t.mean_x, t.sd_x, t.id);
      const double r = lognormal_normal_corr(t.rho, px.sigma, py.sigma);
      const double resid = std::sqrt(std::max(0.0, 1.0 - r * r));
      for (std::size_t i = 0; i < s.values_y.size(); ++i) {
        double z0, z1;
        normal_pair(gen, z0, z1);
        s.values_y[i] =
            t.sd_y == 0.0 ? t.mean_y : std::exp(py.mu + py.sigma * z0);
        s.values_x[i] = t.sd_x == 0.0
                            ? t.mean_x
                            : std::exp(px.mu + px.sigma * (r * z0 + resid * z1));
      }
    }
    pop.strata.push_back(std::move(s));
  }
  return pop;
}

SurveySample draw_srswor(const FinitePopulation& pop,
                         const std::vector<std::int64_t>& n,
                         std::uint64_t replicate_index, std::uint64_t seed) {
  if (n.size() != pop.strata.size())
    throw Error(Errc::StrataMismatch,
                "sample-size list does not match population strata");
  SurveySample sample;
  sample.strata.reserve(pop.strata.size());
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    const PopulationStratum& s = pop.strata[h];
    const std::int64_t N = static_cast<std::int64_t>(s.values_y.size());
    if (n[h] < 1 || n[h] > N)
      throw Error(Errc::SampleExceedsStratum,
                  "stratum '" + s.id + "': cannot draw " + std::to_string(n[h]) +
                      " of " + std::to_string(N));
    auto gen = make_stream(seed, kDrawTag, replicate_index, h);
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(N));
    std::iota(idx.begin(), idx.end(), 0u);
    // partial Fisher-Yates: first n entries are a uniform ordered draw
    for (std::int64_t i = 0; i < n[h]; ++i) {
      const std::uint64_t j =
          static_cast<std::uint64_t>(i) +
          bounded_uint(gen, static_cast<std::uint64_t>(N - i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    std::vector<double> y(static_cast<std::size_t>(n[h]));
    std::vector<double> x(static_cast<std::size_t>(n[h]));
    for (std::int64_t i = 0; i < n[h]; ++i) {
      y[static_cast<std::size_t>(i)] = s.values_y[idx[static_cast<std::size_t>(i)]];
      x[static_cast<std::size_t>(i)] = s.values_x[idx[static_cast<std::size_t>(i)]];
    }
    sample.strata.push_back(make_sample_stratum(s.id, std::move(y), std::move(x)));
  }
  return sample;
}

namespace {

// One replicate's estimator values; NaN marks a failed precondition.
void replicate_values(const FinitePopulation& pop,
                      const std::vector<std::int64_t>& n,
                      const std::vector<EstimatorId>& estimators,
                      const StratifiedDesign& design,
                      const std::optional<LambdaPair>& lambda,
                      const std::optional<std::vector<double>>& a,
                      std::uint64_t replicate, std::uint64_t seed,
                      double* out) {
  const SurveySample sample = draw_srswor(pop, n, replicate, seed);
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    try {
      switch (estimators[e]) {
        case EstimatorId::tp:
          out[e] = point_estimate_tp(sample, design, lambda->lambda1,
                                     lambda->lambda2);
          break;
        case EstimatorId::tR:
          out[e] = point_estimate_classical(EstimatorId::tR, sample, design,
                                            &*a);
          break;
        default:
          out[e] = point_estimate_classical(estimators[e], sample, design);
      }
    } catch (const Error&) {
      out[e] = kNaN;
    }
  }
}

std::optional<double> theoretical_mse_for(const StratifiedDesign& design,
                                          EstimatorId id,
                                          const std::optional<LambdaPair>& lambda,
                                          const std::optional<std::vector<double>>& a) {
  try {
    switch (id) {
      case EstimatorId::tp:
        return mse_tp(design, lambda->lambda1, lambda->lambda2);
      case EstimatorId::tR:
        return mse_tR(design, *a);
      default:
        return mse_classical(design, id);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

SimulationReport simulate(const FinitePopulation& pop,
                          const std::vector<std::int64_t>& n,
                          const std::vector<EstimatorId>& estimators,
                          std::int64_t reps, std::uint64_t seed,
                          unsigned workers) {
  if (reps < 100)
    throw Error(Errc::InvalidSpec, "simulate requires reps >= 100");

  const StratifiedDesign design = pop.realized_design(n);

  SimulationReport report;
  report.requested_replicates = reps;
  report.seed = seed;
  report.true_mean = pop.true_mean_y();

  // estimators that need tuned parameters drop out when the optimum is
  // undefined on this population
  std::vector<EstimatorId> active;
  for (EstimatorId id : estimators) {
    if (id == EstimatorId::tp) {
      try {
        report.lambda_opt = opt_lambdas(design);
      } catch (const Error& e) {
        report.unavailable.emplace_back(id, e.what());
        continue;
      }
    } else if (id == EstimatorId::tR) {
      try {
        report.a_opt = opt_a(design);
      } catch (const Error& e) {
        report.unavailable.emplace_back(id, e.what());
        continue;
      }
    }
    active.push_back(id);
  }

  const std::size_t E = active.size();
  std::vector<double> values(static_cast<std::size_t>(reps) * E);

  auto run_block = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r)
      replicate_values(pop, n, active, design, report.lambda_opt, report.a_opt,
                       static_cast<std::uint64_t>(r), seed,
                       values.data() + static_cast<std::size_t>(r) * E);
  };

  const unsigned nw = std::max(1u, workers);
  if (nw == 1 || reps < 2 * static_cast<std::int64_t>(nw)) {
    run_block(0, reps);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    const std::int64_t chunk = (reps + nw - 1) / nw;
    for (unsigned w = 0; w < nw; ++w) {
      const std::int64_t lo = static_cast<std::int64_t>(w) * chunk;
      const std::int64_t hi = std::min<std::int64_t>(reps, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_block, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  // reduce sequentially in replicate order: bit-identical for any worker count
  const double truth = report.true_mean;
  for (std::size_t e = 0; e < E; ++e) {
    double sum_err = 0.0, sum_sq = 0.0, sum_sq2 = 0.0;
    std::int64_t ok = 0;
    for (std::int64_t r = 0; r < reps; ++r) {
      const double v = values[static_cast<std::size_t>(r) * E + e];
      if (std::isnan(v)) continue;
      const double err = v - truth;
      const double sq = err * err;
      // a squared error that overflows marks a collapsed denominator; treat
      // the replicate as failed rather than poisoning the sums
      if (!std::isfinite(sq * sq)) continue;
      sum_err += err;
      sum_sq += sq;
      sum_sq2 += sq * sq;
      ++ok;
    }
    EstimatorSimulation es;
    es.id = active[e];
    es.replicates = ok;
    es.failed = reps - ok;
    if (ok > 0) {
      const double m = static_cast<double>(ok);
      es.empirical_bias = sum_err / m;
      es.empirical_mse = sum_sq / m;
      const double var_sq =
          std::max(0.0, sum_sq2 / m - es.empirical_mse * es.empirical_mse);
      es.mc_standard_error = std::sqrt(var_sq / m);
    }
    es.theoretical_mse =
        theoretical_mse_for(design, active[e], report.lambda_opt, report.a_opt);
    if (es.failed * 100 > reps) report.high_failure_rate = true;
    report.estimators.push_back(es);
  }
  return report;
}

namespace {

// all size-n index subsets of {0..N-1}, lexicographic
std::vector<std::vector<std::uint32_t>> combinations(std::int64_t N, std::int64_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(static_cast<std::size_t>(n));
  std::iota(cur.begin(), cur.end(), 0u);
  while (true) {
    out.push_back(cur);
    std::int64_t i = n - 1;
    while (i >= 0 &&
           cur[static_cast<std::size_t>(i)] ==
               static_cast<std::uint32_t>(N - n + i))
      --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < n; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

double binomial(std::int64_t N, std::int64_t n) {
  double c = 1.0;
  for (std::int64_t i = 1; i <= n; ++i)
    c *= static_cast<double>(N - n + i) / static_cast<double>(i);
  return c;
}

}  // namespace

EnumerationResult enumerate_exact(const FinitePopulation& pop,
                                  const std::vector<std::int64_t>& n,
                                  const std::vector<EstimatorId>& estimators) {
  if (n.size() != pop.strata.size())
    throw Error(Errc::StrataMismatch,
                "sample-size list does not match population strata");
  double total_d = 1.0;
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    const std::int64_t N = static_cast<std::int64_t>(pop.strata[h].values_y.size());
    if (n[h] < 1 || n[h] > N)
      throw Error(Errc::SampleExceedsStratum,
                  "stratum '" + pop.strata[h].id + "': cannot draw " +
                      std::to_string(n[h]) + " of " + std::to_string(N));
    total_d *= binomial(N, n[h]);
  }
  if (total_d > 1e7)
    throw Error(Errc::TooManySamples,
                "sample space has ~" + std::to_string(total_d) +
                    " points; the guard is 1e7");

  const StratifiedDesign design = pop.realized_design(n);

  EnumerationResult result;
  result.true_mean = pop.true_mean_y();

  std::optional<LambdaPair> lambda;
  std::optional<std::vector<double>> a;
  std::vector<EstimatorId> active;
  for (EstimatorId id : estimators) {
    if (id == EstimatorId::tp) {
      try {
        lambda = opt_lambdas(design);
      } catch (const Error& e) {
        result.unavailable.emplace_back(id, e.what());
        continue;
      }
    } else if (id == EstimatorId::tR) {
      try {
        a = opt_a(design);
      } catch (const Error& e) {
        result.unavailable.emplace_back(id, e.what());
        continue;
      }
    }
    active.push_back(id);
  }

  // precompute every subset's sample moments per stratum
  const std::size_t L = pop.strata.size();
  std::vector<std::vector<SampleStratum>> subset_moments(L);
  for (std::size_t h = 0; h < L; ++h) {
    const PopulationStratum& s = pop.strata[h];
    const auto combos =
        combinations(static_cast<std::int64_t>(s.values_y.size()), n[h]);
    subset_moments[h].reserve(combos.size());
    for (const auto& c : combos) {
      std::vector<double> y(c.size()), x(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) {
        y[i] = s.values_y[c[i]];
        x[i] = s.values_x[c[i]];
      }
      subset_moments[h].push_back(
          make_sample_stratum(s.id, std::move(y), std::move(x)));
    }
  }

  const std::size_t E = active.size();
  std::vector<double> sum(E, 0.0), sum_sq(E, 0.0), sum_err_sq(E, 0.0);
  std::vector<std::int64_t> failed(E, 0);
  std::int64_t total = 0;

  SurveySample sample;
  sample.strata.resize(L);
  std::vector<std::size_t> pick(L, 0);
  for (std::size_t h = 0; h < L; ++h) sample.strata[h] = subset_moments[h][0];

  // odometer over the cross product; only changed strata are reassigned
  while (true) {
    ++total;
    for (std::size_t e = 0; e < E; ++e) {
      double v = kNaN;
      try {
        switch (active[e]) {
          case EstimatorId::tp:
            v = point_estimate_tp(sample, design, lambda->lambda1,
                                  lambda->lambda2);
            break;
          case EstimatorId::tR:
            v = point_estimate_classical(EstimatorId::tR, sample, design, &*a);
            break;
          default:
            v = point_estimate_classical(active[e], sample, design);
        }
      } catch (const Error&) {
      }
      const double err = v - result.true_mean;
      if (std::isnan(v) || !std::isfinite(v * v) || !std::isfinite(err * err)) {
        ++failed[e];
      } else {
        sum[e] += v;
        sum_sq[e] += v * v;
        sum_err_sq[e] += err * err;
      }
    }
    std::size_t h = 0;
    while (h < L && pick[h] + 1 == subset_moments[h].size()) {
      pick[h] = 0;
      sample.strata[h] = subset_moments[h][0];
      ++h;
    }
    if (h == L) break;
    ++pick[h];
    sample.strata[h] = subset_moments[h][pick[h]];
  }

  result.total_samples = total;
  for (std::size_t e = 0; e < E; ++e) {
    ExactEstimatorMoments m;
    m.id = active[e];
    m.failed_samples = failed[e];
    const std::int64_t ok = total - failed[e];
    if (ok > 0) {
      const double k = static_cast<double>(ok);
      m.expectation = sum[e] / k;
      m.variance = std::max(0.0, sum_sq[e] / k - m.expectation * m.expectation);
      m.mse = sum_err_sq[e] / k;
      m.bias = m.expectation - result.true_mean;
    }
    result.estimators.push_back(m);
  }
  return result;
}

GridPoint grid_lambda_oracle(const StratifiedDesign& design, double lambda1_lo,
                             double lambda1_hi, double lambda2_lo,
                             double lambda2_hi, int resolution) {
  if (resolution < 10)
    throw Error(Errc::EmptyRange, "grid resolution must be >= 10 per axis");
  if (!(lambda1_lo <= lambda1_hi) || !(lambda2_lo <= lambda2_hi))
    throw Error(Errc::EmptyRange, "grid bounds are inverted or non-finite");

  const MomentBundle bundle = moment_bundle(design);
  const double step1 = (lambda1_hi - lambda1_lo) / (resolution - 1);
  const double step2 = (lambda2_hi - lambda2_lo) / (resolution - 1);

  GridPoint best;
  best.mse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < resolution; ++i) {
    const double l1 = lambda1_lo + step1 * i;
    for (int j = 0; j < resolution; ++j) {
      const double l2 = lambda2_lo + step2 * j;
      const double m = mse_tp(bundle, l1, l2);
      if (m < best.mse) best = {l1, l2, m};
    }
  }
  return best;
}

}  // namespace strata

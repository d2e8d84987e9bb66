#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "repvote/core.hpp"

namespace repvote {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Parties and voters placed in the unit square; voters approve each party
// independently with probability max(0, 1 - d)^k.
struct Scenario {
  std::vector<Point> parties;
  std::vector<Point> voters;
  double k = 1.424;
  std::uint64_t seed = 0;

  void validate() const;
};

// Uniform positions drawn from `seed`.
Scenario make_scenario(std::size_t n_parties, std::size_t n_voters, double k, std::uint64_t seed);

// max(0, 1 - d)^k. Distances above 1 occur in the unit square and are
// clamped to probability 0.
double vote_probability(double distance, double k);

inline constexpr int kDefaultMaxResamples = 100;

struct SampleResult {
  Election election;
  std::int64_t dropped_voters = 0;    // still empty after every retry
  std::int64_t resampled_voters = 0;  // needed at least one retry
};

// Draws one approval ballot per voter. Each voter has its own random stream
// derived from the scenario seed, so the result is deterministic.
SampleResult sample_ballots(const Scenario& scenario, int max_retries = kDefaultMaxResamples);

struct ExperimentConfig {
  std::size_t n_parties = 20;
  std::size_t n_voters = 5000;
  std::size_t n_runs = 100;
  double k = 1.424;
  std::uint64_t master_seed = 1;
  // When positive, party size is its seat share in a house of this size
  // instead of its assigned ballot share.
  std::int64_t seat_house = 0;

  void validate() const;
};

struct ExponentialFit {
  double decay = 0.0;      // -slope of ln(share) against rank
  double intercept = 0.0;  // ln(share) at rank 1 on the fitted line
  double r_squared = 0.0;
  std::size_t ranks_used = 0;
};

// Least squares of ln(share) on rank over the positive entries. Needs at
// least three positive ranks.
ExponentialFit fit_exponential(std::span<const double> mean_shares);

struct RankSizeReport {
  ExperimentConfig config;
  std::vector<double> mean;  // by rank, largest party first
  std::vector<double> sd;    // sample standard deviation across runs
  ExponentialFit fit;
  std::vector<std::vector<double>> run_shares;  // per run, sorted descending
  std::vector<std::uint64_t> run_seeds;
  std::int64_t dropped_voters = 0;
  std::int64_t resampled_voters = 0;
};

inline constexpr const char* kRunSeedScheme = "run_seed = derive_seed(master_seed, run)";

// Runs are executed in parallel with OpenMP; each owns its seeded streams
// and aggregation happens in run order afterwards.
RankSizeReport run_experiment(const ExperimentConfig& config);
// Serial reference of run_experiment.
RankSizeReport run_experiment_serial(const ExperimentConfig& config);

}  // namespace repvote

#include "repvote/sim.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "repvote/apportion.hpp"
#include "repvote/assign.hpp"
#include "repvote/error.hpp"
#include "repvote/seeding.hpp"

namespace repvote {

namespace {

constexpr std::uint64_t kPositionStream = 0;
constexpr std::uint64_t kBallotStream = 1;

bool in_unit_square(const Point& p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

struct RunOutcome {
  std::vector<double> shares;
  std::int64_t dropped = 0;
  std::int64_t resampled = 0;
};

RunOutcome run_once(const ExperimentConfig& config, std::uint64_t seed) {
  const Scenario scenario = make_scenario(config.n_parties, config.n_voters, config.k, seed);
  SampleResult sample = sample_ballots(scenario);
  RunOutcome out;
  out.dropped = sample.dropped_voters;
  out.resampled = sample.resampled_voters;
  out.shares.assign(config.n_parties, 0.0);
  const std::int64_t v = sample.election.total_voters();
  if (v > 0) {
    const Assignment a = assign_greedy(sample.election);
    if (config.seat_house > 0) {
      const SeatVector seats = seats_largest_remainder(a.assigned, config.seat_house);
      for (std::size_t i = 0; i < config.n_parties; ++i) {
        out.shares[i] = static_cast<double>(seats.seats[i]) / static_cast<double>(config.seat_house);
      }
    } else {
      for (std::size_t i = 0; i < config.n_parties; ++i) {
        out.shares[i] = static_cast<double>(a.assigned[i]) / static_cast<double>(v);
      }
    }
  }
  std::sort(out.shares.begin(), out.shares.end(), std::greater<>());
  return out;
}

RankSizeReport aggregate(const ExperimentConfig& config, std::vector<RunOutcome>& runs) {
  RankSizeReport report;
  report.config = config;
  const std::size_t n = config.n_parties;
  const double count = static_cast<double>(runs.size());
  report.mean.assign(n, 0.0);
  report.sd.assign(n, 0.0);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    report.run_seeds.push_back(derive_seed(config.master_seed, r));
    report.dropped_voters += runs[r].dropped;
    report.resampled_voters += runs[r].resampled;
    for (std::size_t i = 0; i < n; ++i) report.mean[i] += runs[r].shares[i];
  }
  for (double& m : report.mean) m /= count;
  if (runs.size() > 1) {
    for (const RunOutcome& run : runs) {
      for (std::size_t i = 0; i < n; ++i) {
        const double d = run.shares[i] - report.mean[i];
        report.sd[i] += d * d;
      }
    }
    for (double& s : report.sd) s = std::sqrt(s / (count - 1.0));
  }
  std::size_t positive = 0;
  for (double m : report.mean) positive += m > 0.0 ? 1 : 0;
  if (positive >= 3) report.fit = fit_exponential(report.mean);
  for (RunOutcome& run : runs) report.run_shares.push_back(std::move(run.shares));
  return report;
}

}  // namespace

void Scenario::validate() const {
  if (!(k > 0.0)) throw InputError("k must be positive");
  for (const Point& p : parties) {
    if (!in_unit_square(p)) throw InputError("party position outside the unit square");
  }
  for (const Point& p : voters) {
    if (!in_unit_square(p)) throw InputError("voter position outside the unit square");
  }
  if (parties.empty()) throw InputError("scenario has no parties");
  if (parties.size() > kMaxParties) throw InputError("too many parties");
}

Scenario make_scenario(std::size_t n_parties, std::size_t n_voters, double k, std::uint64_t seed) {
  Scenario s;
  s.k = k;
  s.seed = seed;
  std::mt19937_64 rng(derive_seed(seed, kPositionStream));
  s.parties.reserve(n_parties);
  for (std::size_t i = 0; i < n_parties; ++i) {
    const double x = uniform01(rng);
    s.parties.push_back({x, uniform01(rng)});
  }
  s.voters.reserve(n_voters);
  for (std::size_t i = 0; i < n_voters; ++i) {
    const double x = uniform01(rng);
    s.voters.push_back({x, uniform01(rng)});
  }
  return s;
}

double vote_probability(double distance, double k) {
  if (!(k > 0.0)) throw InputError("k must be positive");
  if (!(distance >= 0.0)) throw InputError("distance must be non-negative");
  return std::pow(std::max(0.0, 1.0 - distance), k);
}

SampleResult sample_ballots(const Scenario& scenario, int max_retries) {
  scenario.validate();
  const std::size_t n = scenario.parties.size();
  const std::uint64_t ballot_master = derive_seed(scenario.seed, kBallotStream);

  std::unordered_map<std::uint64_t, std::int64_t> counts;
  std::vector<std::uint64_t> first_seen;
  std::vector<double> prob(n);
  SampleResult out;
  for (std::size_t v = 0; v < scenario.voters.size(); ++v) {
    const Point& voter = scenario.voters[v];
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::hypot(voter.x - scenario.parties[j].x, voter.y - scenario.parties[j].y);
      prob[j] = vote_probability(d, scenario.k);
    }
    std::mt19937_64 rng(derive_seed(ballot_master, v));
    std::uint64_t mask = 0;
    for (int attempt = 0; attempt <= max_retries && mask == 0; ++attempt) {
      if (attempt == 1) ++out.resampled_voters;
      for (std::size_t j = 0; j < n; ++j) {
        if (uniform01(rng) < prob[j]) mask |= std::uint64_t{1} << j;
      }
    }
    if (mask == 0) {
      ++out.dropped_voters;
      continue;
    }
    if (counts[mask]++ == 0) first_seen.push_back(mask);
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < n; ++j) names.push_back("P" + std::to_string(j + 1));
  std::vector<BallotType> types;
  types.reserve(first_seen.size());
  for (std::uint64_t mask : first_seen) types.push_back({PartySet(mask), counts[mask], {}});
  out.election = Election(std::move(names), std::move(types));
  return out;
}

void ExperimentConfig::validate() const {
  if (n_parties == 0 || n_parties > kMaxParties) throw InputError("party count must be in 1..64");
  if (n_voters == 0) throw InputError("voter count must be positive");
  if (n_runs == 0) throw InputError("run count must be positive");
  if (!(k > 0.0)) throw InputError("k must be positive");
  if (seat_house < 0) throw InputError("seat house size must be non-negative");
}

ExponentialFit fit_exponential(std::span<const double> mean_shares) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < mean_shares.size(); ++i) {
    if (mean_shares[i] > 0.0) {
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(std::log(mean_shares[i]));
    }
  }
  if (xs.size() < 3) throw InputError("exponential fit needs at least three positive ranks");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  ExponentialFit fit;
  fit.decay = -slope;
  fit.intercept = my - slope * mx + slope;
  fit.ranks_used = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ss_res += r * r;
  }
  // A flat series is fitted exactly by a zero slope.
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

RankSizeReport run_experiment_serial(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunOutcome> runs(config.n_runs);
  for (std::size_t r = 0; r < config.n_runs; ++r) {
    runs[r] = run_once(config, derive_seed(config.master_seed, r));
  }
  return aggregate(config, runs);
}

RankSizeReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunOutcome> runs(config.n_runs);
  const std::int64_t n_runs = static_cast<std::int64_t>(config.n_runs);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < n_runs; ++r) {
    const auto idx = static_cast<std::size_t>(r);
    runs[idx] = run_once(config, derive_seed(config.master_seed, idx));
  }
  return aggregate(config, runs);
}

}  // namespace repvote

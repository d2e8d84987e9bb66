#include <gtest/gtest.h>

#include <cmath>

#include "repvote/error.hpp"
#include "repvote/sim.hpp"

namespace repvote {
namespace {

TEST(VoteProbability, Values) {
  EXPECT_DOUBLE_EQ(vote_probability(0.0, 1.424), 1.0);
  EXPECT_DOUBLE_EQ(vote_probability(1.0, 1.424), 0.0);
  EXPECT_DOUBLE_EQ(vote_probability(1.3, 1.424), 0.0);
  EXPECT_NEAR(vote_probability(0.5, 1.424), 0.3727, 1e-4);
  EXPECT_THROW(vote_probability(0.5, 0.0), InputError);
  EXPECT_THROW(vote_probability(-0.1, 1.0), InputError);
}

TEST(Scenario, DeterministicPerSeed) {
  const Scenario a = make_scenario(5, 50, 1.424, 3);
  const Scenario b = make_scenario(5, 50, 1.424, 3);
  const Scenario c = make_scenario(5, 50, 1.424, 4);
  ASSERT_EQ(a.parties.size(), 5u);
  ASSERT_EQ(a.voters.size(), 50u);
  EXPECT_EQ(a.parties[2].x, b.parties[2].x);
  EXPECT_EQ(a.voters[49].y, b.voters[49].y);
  EXPECT_NE(a.voters[0].x, c.voters[0].x);
  for (const Point& p : a.voters) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LT(p.x, 1.0);
  }
}

TEST(SampleBallots, SameSeedSameElection) {
  const Scenario s = make_scenario(8, 300, 1.424, 10);
  const SampleResult a = sample_ballots(s);
  const SampleResult b = sample_ballots(s);
  EXPECT_EQ(a.election.total_voters(), b.election.total_voters());
  ASSERT_EQ(a.election.ballot_types().size(), b.election.ballot_types().size());
  for (std::size_t t = 0; t < a.election.ballot_types().size(); ++t) {
    EXPECT_EQ(a.election.ballot_types()[t].approvals, b.election.ballot_types()[t].approvals);
    EXPECT_EQ(a.election.ballot_types()[t].count, b.election.ballot_types()[t].count);
  }
  EXPECT_EQ(a.election.total_voters() + a.dropped_voters, 300);
}

TEST(SampleBallots, VoterOnTopOfPartyApprovesIt) {
  Scenario s;
  s.parties = {{0.2, 0.2}, {0.9, 0.9}};
  s.voters = {{0.2, 0.2}};
  s.k = 1.424;
  const SampleResult r = sample_ballots(s);
  ASSERT_EQ(r.election.ballot_types().size(), 1u);
  EXPECT_TRUE(r.election.ballot_types()[0].approvals.contains(PartyId{0}));
}

TEST(SampleBallots, SteepDecayForcesResampling) {
  const SampleResult r = sample_ballots(make_scenario(3, 200, 60.0, 1));
  EXPECT_GT(r.resampled_voters + r.dropped_voters, 0);
}

TEST(SampleBallots, CoincidentPartiesWithFlatDecayLeaveSecondAlmostEmpty) {
  Scenario s = make_scenario(2, 2000, 0.02, 6);
  s.parties[1] = s.parties[0];
  const SampleResult r = sample_ballots(s);
  const auto shares_of = [&](const Election& e) {
    std::vector<std::int64_t> tally(2, 0);
    for (const BallotType& t : e.ballot_types()) {
      if (t.approvals.size() == 1) tally[t.approvals.first().index()] += t.count;
    }
    return tally;
  };
  const auto singles = shares_of(r.election);
  EXPECT_LT(static_cast<double>(singles[0] + singles[1]) / r.election.total_voters(), 0.1);
}

TEST(ExponentialFit, GeometricSequenceIsExact) {
  const std::vector<double> shares{0.64, 0.32, 0.16, 0.08};
  const ExponentialFit f = fit_exponential(shares);
  EXPECT_NEAR(f.decay, std::log(2.0), 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.ranks_used, 4u);
}

TEST(ExponentialFit, ConstantSharesHaveZeroSlope) {
  const ExponentialFit f = fit_exponential(std::vector<double>{0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(f.decay, 0.0, 1e-12);
}

TEST(ExponentialFit, ZeroSharesAreSkipped) {
  const ExponentialFit f = fit_exponential(std::vector<double>{0.5, 0.25, 0.125, 0.125, 0.0});
  EXPECT_EQ(f.ranks_used, 4u);
  EXPECT_THROW(fit_exponential(std::vector<double>{1.0, 0.0, 0.0}), InputError);
}

TEST(Experiment, OnePartyTakesEverything) {
  ExperimentConfig c;
  c.n_parties = 1;
  c.n_voters = 50;
  c.n_runs = 5;
  const RankSizeReport r = run_experiment(c);
  for (const auto& run : r.run_shares) EXPECT_DOUBLE_EQ(run[0], 1.0);
}

TEST(Experiment, ParallelMatchesSerialAndIsDeterministic) {
  ExperimentConfig c;
  c.n_parties = 10;
  c.n_voters = 500;
  c.n_runs = 12;
  c.master_seed = 42;
  const RankSizeReport a = run_experiment(c);
  const RankSizeReport b = run_experiment_serial(c);
  const RankSizeReport again = run_experiment(c);
  EXPECT_EQ(a.run_shares, b.run_shares);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.run_shares, again.run_shares);
  EXPECT_EQ(a.run_seeds, b.run_seeds);
  for (const auto& run : a.run_shares) {
    EXPECT_TRUE(std::is_sorted(run.rbegin(), run.rend()));
    double sum = 0;
    for (double x : run) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Experiment, SeatHouseUsesSeatShares) {
  ExperimentConfig c;
  c.n_parties = 6;
  c.n_voters = 300;
  c.n_runs = 3;
  c.seat_house = 50;
  const RankSizeReport r = run_experiment(c);
  for (const auto& run : r.run_shares) {
    for (double x : run) EXPECT_NEAR(x * 50, std::round(x * 50), 1e-9);
  }
}

TEST(Experiment, RejectsBadConfig) {
  ExperimentConfig c;
  c.n_runs = 0;
  EXPECT_THROW(run_experiment(c), InputError);
  c = {};
  c.k = -1;
  EXPECT_THROW(run_experiment(c), InputError);
}

}  // namespace
}  // namespace repvote

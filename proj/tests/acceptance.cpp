// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failures.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "repvote/apportion.hpp"
#include "repvote/assign.hpp"
#include "repvote/ballot_file.hpp"
#include "repvote/cli.hpp"
#include "repvote/seeding.hpp"
#include "repvote/sim.hpp"
#include "repvote/space.hpp"
#include "support.hpp"

namespace rv = repvote;
using rv::PartyId;
using rv::Tally;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void check(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_seconds) {
    o.pass = false;
    o.detail += " [over time budget " + std::to_string(budget_seconds) + "s]";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << "; " << std::fixed
            << std::setprecision(2) << secs << "s)" << std::endl;
}

// Small instances shared by the oracle and convexity criteria.
std::vector<rv::Election> small_instances() {
  std::vector<rv::Election> out;
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 200; ++i) {
    out.push_back(rv::testing::random_election(rng, 1 + rng() % 3, 1 + rng() % 6, 0.5));
  }
  // Every 2-party election with 1..4 voters: counts of {a}, {b}, {a,b}.
  for (std::int64_t v = 1; v <= 4; ++v) {
    for (std::int64_t x = 0; x <= v; ++x) {
      for (std::int64_t y = 0; x + y <= v; ++y) {
        out.push_back(rv::testing::make_election({"a", "b"}, {{{"a"}, x}, {{"b"}, y}, {{"a", "b"}, v - x - y}}));
      }
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const std::string toy_path = REPVOTE_FIXTURE_DIR "/toy.csv";
  const std::string tie_path = REPVOTE_FIXTURE_DIR "/tie_fixture.json";

  check("worked example: achievable set and voter product", 1.0, [&] {
    const rv::Election e = rv::to_election(rv::read_ballot_file(toy_path));
    const std::vector<Tally> expected{{0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 0}};
    const auto product = rv::voter_choice_product(e);
    const std::set<std::vector<PartyId>> c(product.begin(), product.end());
    const std::set<std::vector<PartyId>> expected_c{{PartyId{0}, PartyId{1}},
                                                 {PartyId{0}, PartyId{2}},
                                                 {PartyId{1}, PartyId{1}},
                                                 {PartyId{1}, PartyId{2}}};
    const bool ok = rv::brute_force_achievable(e) == expected && c == expected_c && product.size() == 4;
    return Outcome{ok, "4 tallies, |C|=" + std::to_string(product.size())};
  });

  const std::vector<rv::Election> instances = small_instances();

  check("oracle equivalence: is_representative vs brute force", 60.0, [&] {
    std::size_t targets = 0, disagreements = 0;
    for (const rv::Election& e : instances) {
      const auto achievable = rv::brute_force_achievable(e);
      const std::set<Tally> reachable(achievable.begin(), achievable.end());
      if (reachable != rv::testing::oracle_achievable(e)) ++disagreements;
      for (const Tally& t : rv::testing::all_compositions(e.party_count(), e.total_voters())) {
        ++targets;
        if (rv::is_representative(e, t).feasible != reachable.contains(t)) ++disagreements;
      }
    }
    return Outcome{disagreements == 0, std::to_string(instances.size()) + " elections, " + std::to_string(targets) +
                                           " targets, " + std::to_string(disagreements) + " disagreements"};
  });

  check("convexity: hull integer points equal achievable set", 120.0, [&] {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const rv::Election& e = instances[i];
      const auto vertices = rv::enumerate_vertices(e);
      const auto hull = rv::hull_integer_points(vertices.vertices, e.total_voters());
      const rv::ConvexityReport r = rv::convexity_audit(e, i);
      if (!vertices.exhaustive || hull != rv::brute_force_achievable(e) || !r.passed()) ++bad;
    }
    return Outcome{bad == 0, std::to_string(instances.size()) + " elections, " + std::to_string(bad) + " mismatches"};
  });

  check("representativity and range on random instances", 60.0, [&] {
    std::mt19937_64 rng(777);
    std::size_t assignments = 0, violations = 0;
    auto audit = [&](const rv::Election& e, const rv::Assignment& a) {
      ++assignments;
      bool ok = a.per_type.size() == e.ballot_types().size();
      Tally sum(e.party_count(), 0);
      for (std::size_t t = 0; ok && t < a.per_type.size(); ++t) {
        std::int64_t row = 0;
        for (std::size_t p = 0; p < e.party_count(); ++p) {
          const std::int64_t x = a.per_type[t][p];
          if (x < 0 || (x > 0 && !e.ballot_types()[t].approvals.contains(PartyId{p}))) ok = false;
          row += x;
          sum[p] += x;
        }
        if (row != e.ballot_types()[t].count) ok = false;
      }
      ok = ok && sum == a.assigned &&
           std::accumulate(sum.begin(), sum.end(), std::int64_t{0}) == e.total_voters();
      for (std::size_t p = 0; ok && p < e.party_count(); ++p) {
        ok = rv::only_voted_count(e, PartyId{p}) <= a.assigned[p] && a.assigned[p] <= rv::total_approvals(e, PartyId{p});
      }
      if (!ok) ++violations;
    };
    for (int i = 0; i < 1000; ++i) {
      const std::size_t parties = 1 + rng() % 10;
      const double density = 0.1 + 0.5 * rv::uniform01(rng);
      const rv::Election e = rv::testing::random_election(rng, parties, 1 + rng() % 500, density);
      const rv::Election senate = rv::testing::random_election(rng, parties, 1 + rng() % 500, density);
      audit(e, rv::assign_greedy(e, rv::TiePolicy::authority()));
      audit(e, rv::assign_greedy(e, rv::TiePolicy::skip()));
      std::vector<PartyId> order;
      for (std::size_t p = 0; p < parties; ++p) order.emplace_back(p);
      std::shuffle(order.begin(), order.end(), rng);
      audit(e, rv::assign_by_order(e, order));
      audit(e, rv::assign_with_cap(e, rv::CapConfig{0.3 + 0.6 * rv::uniform01(rng), rng()}));
      const rv::TwoHouseResult two = rv::assign_two_house(e, senate);
      audit(e, two.commons);
      audit(senate, two.senate);
    }
    return Outcome{violations == 0, std::to_string(assignments) + " assignments, " + std::to_string(violations) +
                                        " violations"};
  });

  check("clone test", 60.0, [&] {
    std::mt19937_64 rng(4242);
    int made = 0, violations = 0, attempts = 0;
    while (made < 100 && attempts < 10000) {
      ++attempts;
      const rv::Election base = rv::testing::random_election(rng, 2 + rng() % 7, 1 + rng() % 200);
      const Tally before = rv::assign_greedy(base).assigned;
      std::vector<std::size_t> winners;
      for (std::size_t p = 0; p < before.size(); ++p) {
        if (before[p] > 0) winners.push_back(p);
      }
      const PartyId original{winners[rng() % winners.size()]};
      std::vector<std::string> names = base.parties();
      names.push_back("clone");
      std::vector<rv::RawBallot> raw;
      for (const rv::BallotType& t : base.ballot_types()) {
        rv::RawBallot b;
        b.count = t.count;
        t.approvals.for_each([&](PartyId p) { b.approvals.push_back(base.party_name(p)); });
        if (t.approvals.contains(original)) b.approvals.push_back("clone");
        raw.push_back(std::move(b));
      }
      const rv::Election e = rv::validate_election(names, raw);
      const Tally after = rv::assign_greedy(e).assigned;
      const bool one_zero = (after[original.index()] == 0) != (after.back() == 0);
      if (!one_zero) ++violations;
      ++made;
    }
    return Outcome{made == 100 && violations == 0,
                   std::to_string(made) + " instances, " + std::to_string(violations) + " violations"};
  });

  check("simulation: first-party share, fit quality, exponent stability", 300.0, [&] {
    rv::ExperimentConfig base;  // 20 parties, 5000 voters, k=1.424, 100 runs
    const rv::RankSizeReport main = rv::run_experiment(base);
    double lo = INFINITY, hi = 0, worst_r2 = 1;
    std::ostringstream decays;
    decays << std::setprecision(3);
    for (std::size_t voters : {2500, 5000, 10000}) {
      for (std::size_t parties : {10, 20, 30}) {
        rv::ExperimentConfig c = base;
        c.n_voters = voters;
        c.n_parties = parties;
        const rv::RankSizeReport r = (voters == 5000 && parties == 20) ? main : rv::run_experiment(c);
        lo = std::min(lo, r.fit.decay);
        hi = std::max(hi, r.fit.decay);
        worst_r2 = std::min(worst_r2, r.fit.r_squared);
        decays << ' ' << r.fit.decay;
      }
    }
    const double share = main.mean[0];
    const double variation = (hi - lo) / lo;
    std::ostringstream d;
    d << std::setprecision(4) << "first share " << share << " sd " << main.sd[0] << ", R2 " << main.fit.r_squared
      << " (min over grid " << worst_r2 << "), decay" << decays.str() << ", variation " << variation;
    const bool ok = share >= 0.464 && share <= 0.534 && main.fit.r_squared >= 0.9 && variation < 0.15;
    return Outcome{ok, d.str()};
  });

  check("tie strategies on the 26/26 fixture", 1.0, [&] {
    const rv::Election e = rv::to_election(rv::read_ballot_file(tie_path));
    auto names = [&](const rv::Assignment& a) {
      std::vector<std::string> out;
      for (PartyId p : a.order) out.push_back(e.party_name(p));
      return out;
    };
    const rv::Assignment split = rv::assign_greedy(e, rv::TiePolicy::split());
    const rv::Assignment authority = rv::assign_greedy(
        e, rv::TiePolicy::authority(rv::complete_order(std::vector<PartyId>{e.party("FdI")}, e.party_count())));
    const rv::Assignment skip = rv::assign_greedy(e, rv::TiePolicy::skip());
    const bool split_ok = split.assigned[e.party("FI").index()] == 19 && split.assigned[e.party("FdI").index()] == 19 &&
                          !split.ties.empty() && split.ties[0].score == 26;
    const bool authority_ok =
        names(authority) == std::vector<std::string>{"M5S", "PD", "FdI", "FI", "SEL", "NCD", "UDC", "Lega"};
    const bool skip_ok = names(skip) == std::vector<std::string>{"M5S", "PD", "Lega", "FdI", "SEL", "FI", "NCD", "UDC"};
    const bool feasible = rv::is_representative(e, split.assigned).feasible &&
                          rv::is_representative(e, authority.assigned).feasible &&
                          rv::is_representative(e, skip.assigned).feasible;
    std::ostringstream d;
    d << "split " << split.assigned[e.party("FI").index()] << '/' << split.assigned[e.party("FdI").index()]
      << ", authority " << (authority_ok ? "ok" : "wrong order") << ", skip " << (skip_ok ? "ok" : "wrong order")
      << ", representative " << (feasible ? "yes" : "no");
    return Outcome{split_ok && authority_ok && skip_ok && feasible, d.str()};
  });

  check("italicum bonus and runoff", 1.0, [&] {
    auto votes = [](const std::vector<std::int64_t>& counts) {
      std::vector<rv::SingleVoteBallot> out;
      for (std::size_t p = 0; p < counts.size(); ++p) {
        for (std::int64_t i = 0; i < counts[p]; ++i) out.push_back({PartyId{p}});
      }
      return out;
    };
    auto ranked = [](const std::vector<std::pair<std::vector<int>, int>>& groups) {
      std::vector<rv::RankedBallot> out;
      for (const auto& [order, n] : groups) {
        rv::RankedBallot b;
        for (int p : order) b.ranking.emplace_back(p);
        out.insert(out.end(), n, b);
      }
      return out;
    };
    int ok = 0;
    // 45% share, 100 seats.
    const auto a = rv::italicum(votes({45, 30, 25}), {}, 3, {}, 100);
    ok += !a.runoff_held && a.winner == PartyId{0} && a.seats.seats[0] == 54;
    // 42% share, 25 seats: 0.54 * 25 = 13.5 rounds to 14.
    const auto b = rv::italicum(votes({42, 31, 27}), {}, 3, {}, 25);
    ok += !b.runoff_held && b.winner == PartyId{0} && b.seats.seats[0] == 14;
    // 35%/30%: the runner-up wins the runoff on rankings.
    const auto c = rv::italicum(votes({35, 30, 20, 15}),
                                ranked({{{0, 1, 2, 3}, 35}, {{1, 0, 2, 3}, 30}, {{2, 1, 0, 3}, 20}, {{3, 1, 0, 2}, 15}}),
                                4, {}, 100);
    ok += c.runoff_held && c.winner == PartyId{1} && c.seats.seats[1] == 54 && c.runoff_votes_second == 65;
    return Outcome{ok == 3, std::to_string(ok) + "/3 fixtures"};
  });

  check("determinism: repeated CLI runs write identical files", 60.0, [&] {
    const auto dir = std::filesystem::temp_directory_path() / "repvote_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::vector<std::string>> commands{
        {"tabulate", tie_path, "--tie", "skip", "--format", "json"},
        {"tabulate", tie_path, "--tie", "split", "--format", "csv", "--seats", "100"},
        {"tabulate", toy_path, "--method", "order", "--order", "c,b,a"},
        {"tabulate", tie_path, "--method", "cap", "--cap", "0.3", "--seed", "11", "--format", "json"},
        {"tabulate", toy_path, "--method", "twohouse", "--senate", toy_path, "--format", "json"},
        {"compare", toy_path, "--seats", "10", "--format", "json"},
        {"space", toy_path, "--enumerate", "--audit", "--seed", "5"},
        {"simulate", "--parties", "8", "--voters", "800", "--runs", "10", "--seed", "17", "--format", "json"},
    };
    std::size_t identical = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      std::string outputs[2];
      for (int rep = 0; rep < 2; ++rep) {
        const std::string path = (dir / ("run" + std::to_string(i) + "_" + std::to_string(rep))).string();
        std::vector<std::string> args{"repvote"};
        args.insert(args.end(), commands[i].begin(), commands[i].end());
        args.push_back("-o");
        args.push_back(path);
        std::vector<const char*> argv;
        for (const auto& s : args) argv.push_back(s.c_str());
        std::ostringstream out, err;
        if (rv::run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != 0) break;
        outputs[rep] = slurp(path);
      }
      if (!outputs[0].empty() && outputs[0] == outputs[1]) ++identical;
    }
    return Outcome{identical == commands.size(),
                   std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands identical"};
  });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures;
}

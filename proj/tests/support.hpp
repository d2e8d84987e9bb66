#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "repvote/core.hpp"

namespace repvote::testing {

inline std::vector<std::string> party_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

// Builds an election from (approval list, count) pairs over named parties.
inline Election make_election(std::vector<std::string> parties,
                              const std::vector<std::pair<std::vector<std::string>, std::int64_t>>& groups) {
  std::vector<RawBallot> raw;
  for (const auto& [names, count] : groups) raw.push_back(RawBallot{names, count, {}});
  return validate_election(std::move(parties), raw);
}

// Random election: every voter approves each party with probability
// `density`, redrawn until non-empty.
inline Election random_election(std::mt19937_64& rng, std::size_t parties, std::size_t voters,
                                double density = 0.4) {
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<std::size_t> any(0, parties - 1);
  const auto names = party_names(parties);
  std::vector<RawBallot> raw;
  for (std::size_t v = 0; v < voters; ++v) {
    RawBallot b;
    for (std::size_t p = 0; p < parties; ++p) {
      if (coin(rng)) b.approvals.push_back(names[p]);
    }
    if (b.approvals.empty()) b.approvals.push_back(names[any(rng)]);
    raw.push_back(std::move(b));
  }
  return validate_election(names, raw);
}

// Independent oracle: expand ballot types into single voters and try every
// choice of one approved party per voter.
inline std::set<Tally> oracle_achievable(const Election& e) {
  std::vector<std::vector<std::size_t>> voters;
  for (const BallotType& t : e.ballot_types()) {
    std::vector<std::size_t> options;
    for (std::size_t p = 0; p < e.party_count(); ++p) {
      if (t.approvals.contains(PartyId{p})) options.push_back(p);
    }
    for (std::int64_t i = 0; i < t.count; ++i) voters.push_back(options);
  }
  std::set<Tally> out;
  Tally current(e.party_count(), 0);
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == voters.size()) {
      out.insert(current);
      return;
    }
    for (std::size_t p : voters[v]) {
      ++current[p];
      self(self, v + 1);
      --current[p];
    }
  };
  rec(rec, 0);
  return out;
}

// Every tally of `parties` non-negative entries summing to `total`.
inline std::vector<Tally> all_compositions(std::size_t parties, std::int64_t total) {
  std::vector<Tally> out;
  Tally current(parties, 0);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i + 1 == parties) {
      current[i] = left;
      out.push_back(current);
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      current[i] = x;
      self(self, i + 1, left - x);
    }
  };
  rec(rec, 0, total);
  return out;
}

}  // namespace repvote::testing

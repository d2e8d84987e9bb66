#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "repvote/core.hpp"

namespace repvote {

struct SeatVector {
  std::vector<std::int64_t> seats;
  std::int64_t house_size = 0;

  friend bool operator==(const SeatVector&, const SeatVector&) = default;
};

// Hare quota with largest remainders. Remainders are compared exactly as
// integers; equal remainders go to the earlier party in list order.
SeatVector seats_largest_remainder(std::span<const std::int64_t> counts, std::int64_t house_size);

// One vote per ballot, no threshold.
SeatVector pure_proportional(std::span<const SingleVoteBallot> ballots, std::size_t party_count,
                             std::int64_t house_size);

Tally single_vote_tally(std::span<const SingleVoteBallot> ballots, std::size_t party_count);

struct ItalicumConfig {
  double threshold = 0.03;
  double majority_trigger = 0.40;
  double bonus_share = 0.54;

  void validate() const;
};

struct ItalicumResult {
  SeatVector seats;
  PartyId winner;
  std::int64_t bonus_seats = 0;        // round-half-up of bonus_share * house
  std::vector<PartyId> excluded;       // below the threshold
  bool runoff_held = false;
  PartyId runoff_first;                // leader of the first round
  PartyId runoff_second;
  std::int64_t runoff_votes_first = 0;
  std::int64_t runoff_votes_second = 0;
  std::int64_t runoff_neither = 0;     // rankings naming neither finalist
  std::int64_t truncated_rankings = 0;
};

// Single-constituency Italicum. The winner gets at least the bonus; a
// proportional entitlement above it is kept. Throws Unresolvable when fewer
// than two parties clear the threshold.
ItalicumResult italicum(std::span<const SingleVoteBallot> single_votes,
                        std::span<const RankedBallot> rankings, std::size_t party_count,
                        const ItalicumConfig& config, std::int64_t house_size);

std::int64_t round_half_up(double x);

}  // namespace repvote

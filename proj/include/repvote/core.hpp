#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repvote/party_set.hpp"

namespace repvote {

// Candidate name -> number of ballots naming that candidate.
using CandidateCounts = std::map<std::string, std::int64_t>;

// Per-party counts, indexed by PartyId.
using Tally = std::vector<std::int64_t>;

// The group of voters who approved exactly the same set of parties.
struct BallotType {
  PartySet approvals;
  std::int64_t count = 0;
  // Candidate preferences expressed on these ballots, per approved party.
  // Keys are a subset of `approvals`; each inner total is at most `count`.
  std::map<PartyId, CandidateCounts> preferences;

  friend bool operator==(const BallotType&, const BallotType&) = default;
};

// A ballot as it arrives from ingestion, referencing parties by name.
// `count` > 1 represents a group of identical ballots.
struct RawBallot {
  std::vector<std::string> approvals;
  std::int64_t count = 1;
  std::map<std::string, CandidateCounts> candidates;
};

struct RankedBallot {
  std::vector<PartyId> ranking;  // most preferred first

  bool is_complete(std::size_t party_count) const;
};

struct SingleVoteBallot {
  PartyId choice;
};

// Immutable approval election. Ballot types are merged by approval set and
// kept sorted by their party mask, so two elections with the same content
// compare equal regardless of input order.
class Election {
 public:
  Election() = default;

  // Checks every invariant and throws InputError on violation: distinct
  // party names, at most kMaxParties parties, non-empty and pairwise
  // distinct approval sets, non-negative counts, preference keys within
  // approvals.
  Election(std::vector<std::string> parties, std::vector<BallotType> types,
           std::int64_t invalid_ballots = 0);

  const std::vector<std::string>& parties() const { return parties_; }
  std::size_t party_count() const { return parties_.size(); }
  const std::vector<BallotType>& ballot_types() const { return types_; }
  std::int64_t total_voters() const { return total_voters_; }
  std::int64_t invalid_ballots() const { return invalid_ballots_; }
  PartySet all_parties() const { return PartySet::all(parties_.size()); }

  const std::string& party_name(PartyId p) const { return parties_.at(p.index()); }
  std::optional<PartyId> find_party(std::string_view name) const;
  // Like find_party but throws InputError for unknown names.
  PartyId party(std::string_view name) const;

  friend bool operator==(const Election&, const Election&) = default;

 private:
  std::vector<std::string> parties_;
  std::vector<BallotType> types_;
  std::int64_t total_voters_ = 0;
  std::int64_t invalid_ballots_ = 0;
};

// Builds an Election from named ballots. Identical approval sets are merged
// (counts and candidate preferences summed); ballots with no approvals are
// dropped and counted in invalid_ballots().
Election validate_election(std::vector<std::string> parties, std::span<const RawBallot> ballots);

// Approval counts over ballot types disjoint from `removed`. Removed parties
// tally zero.
Tally tally_remaining(const Election& election, PartySet removed);

// Ballots whose approval set is exactly {party}.
std::int64_t only_voted_count(const Election& election, PartyId party);

// Ballots approving `party` (its tally with nothing removed).
std::int64_t total_approvals(const Election& election, PartyId party);

}  // namespace repvote

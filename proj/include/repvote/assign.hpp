#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "repvote/core.hpp"

namespace repvote {

// How equal maximum tallies are resolved. The policy must be fixed before
// counting starts.
struct TiePolicy {
  enum class Kind { kSplit, kAuthority, kSkip };

  Kind kind = Kind::kAuthority;
  // Preference of the deciding authority, most preferred first. Empty means
  // party-list order.
  std::vector<PartyId> authority_order;

  static TiePolicy split() { return {Kind::kSplit, {}}; }
  static TiePolicy authority(std::vector<PartyId> order = {}) {
    return {Kind::kAuthority, std::move(order)};
  }
  static TiePolicy skip() { return {Kind::kSkip, {}}; }

  // Throws InputError unless authority_order is empty or a permutation.
  void validate(std::size_t party_count) const;
};

std::string_view to_string(TiePolicy::Kind kind);
TiePolicy::Kind parse_tie_kind(std::string_view name);

struct Round {
  Tally remaining;                // tallies before the selection
  std::vector<PartyId> selected;  // two parties when a tie was split
  std::int64_t absorbed = 0;
};

struct TieEvent {
  std::size_t round = 0;
  std::vector<PartyId> tied;
  std::int64_t score = 0;
  TiePolicy::Kind policy = TiePolicy::Kind::kAuthority;
  std::vector<PartyId> selected;
  // Skip found no other party with ballots left and fell back to list order.
  bool fallback = false;
};

struct CapConfig {
  double threshold = 0.55;  // maximum share of v a party may absorb
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct CapReport {
  double threshold = 0.0;
  std::uint64_t rng_seed = 0;
  std::int64_t limit = 0;               // floor(threshold * v)
  std::vector<PartyId> capped;          // parties whose intake was cut
  std::vector<PartyId> violations;      // forced ballots alone exceeded the limit
};

struct Assignment {
  Tally assigned;                 // ballots per party, sums to v
  std::vector<PartyId> order;     // parties in the order they absorbed ballots
  std::vector<Round> rounds;
  // per_type[t][p]: ballots of election.ballot_types()[t] assigned to party p.
  std::vector<std::vector<std::int64_t>> per_type;
  std::vector<TieEvent> ties;
  std::optional<CapReport> cap;
};

// Outcome of a tie: one selected party, or a pair to split.
struct TieResolution {
  std::vector<PartyId> selected;
  bool split = false;
  bool fallback = false;
};

// Resolves a shared maximum among `tied` given the current scores of the
// parties still in play (`eligible`). Split with more than two tied parties
// throws Unresolvable.
TieResolution resolve_tie(std::span<const std::int64_t> scores, PartySet tied,
                          const TiePolicy& policy, PartySet eligible);

// Round-by-round greedy assignment. Exposes each tie before it is resolved
// so an interactive caller can decide it; assign_greedy drives it with the
// configured policy.
class GreedyStepper {
 public:
  // `election` must outlive the stepper.
  GreedyStepper(const Election& election, TiePolicy policy,
                std::optional<CapConfig> cap = std::nullopt);
  GreedyStepper(const GreedyStepper&) = default;
  GreedyStepper& operator=(const GreedyStepper&) = default;

  bool done() const;
  Tally remaining_tally() const;
  // Parties sharing the current maximum, when there is more than one.
  std::optional<std::vector<PartyId>> pending_tie() const;

  // Advances one round, resolving any tie with the configured policy.
  const Round& step();
  // Advances one round with an explicit decision for the current round.
  // select: the party must hold the maximum tally.
  const Round& step_select(PartyId party);
  const Round& step_split();
  const Round& step_skip();
  // Gives the next turn to any party still in play, ignoring tallies (an
  // authority fixing the order).
  const Round& step_force(PartyId party);

  const Assignment& assignment() const { return result_; }
  const TiePolicy& policy() const { return policy_; }
  Assignment finish();

 private:
  const Round& apply(const TieResolution& resolution, std::optional<TieEvent> event);
  const Round& resolve_current(const TiePolicy& policy);

  const Election* election_;
  TiePolicy policy_;
  std::optional<CapConfig> cap_;
  std::mt19937_64 rng_;
  std::vector<std::int64_t> remaining_;  // per ballot type
  std::vector<PartySet> effective_;      // approvals still usable per type
  PartySet selected_;
  Assignment result_;
};

Assignment assign_greedy(const Election& election, const TiePolicy& policy = TiePolicy::authority());

// Parties absorb remaining ballots strictly in `party_order`.
Assignment assign_by_order(const Election& election, std::span<const PartyId> party_order);

// Assigned counts only, for the by-order rule; no trace is kept.
Tally assigned_by_order(const Election& election, std::span<const PartyId> party_order);

// Greedy with a share cap: a selected party keeps all ballots that can only
// go to it, then a seeded uniform subset of its multi-approval ballots up to
// floor(threshold * v). Ballots it does not take stay in play for their
// other approved parties. Split ties are not supported with a cap.
Assignment assign_with_cap(const Election& election, const CapConfig& cap,
                           const TiePolicy& policy = TiePolicy::authority());

struct TwoHouseResult {
  std::vector<PartyId> order;
  std::vector<Tally> scores;  // per round: min of the two houses' tallies
  std::vector<TieEvent> ties;
  Assignment commons;
  Assignment senate;
};

// Both houses absorb in one shared order chosen by max of min(commons,
// senate) remaining tallies. When every min score is zero but ballots are
// left, the sum of the two tallies ranks the remaining parties.
TwoHouseResult assign_two_house(const Election& commons, const Election& senate,
                                const TiePolicy& policy = TiePolicy::authority());

// Candidate-name counts per party, counting a preference only on ballots
// assigned to that party. Split ballot types attribute names in proportion
// to the split (largest remainder, so counts stay integral).
std::vector<CandidateCounts> candidate_tallies(const Election& election, const Assignment& assignment);

// `prefix` followed by the remaining parties in list order.
std::vector<PartyId> complete_order(std::span<const PartyId> prefix, std::size_t party_count);

// Throws InputError unless `order` is a permutation of 0..party_count-1.
void require_permutation(std::span<const PartyId> order, std::size_t party_count);

}  // namespace repvote

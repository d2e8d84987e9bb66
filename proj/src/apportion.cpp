#include "repvote/apportion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "repvote/error.hpp"

namespace repvote {

SeatVector seats_largest_remainder(std::span<const std::int64_t> counts, std::int64_t house_size) {
  if (house_size <= 0) throw InputError("house size must be positive");
  __int128 total = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw InputError("negative count in apportionment");
    total += c;
  }
  if (total == 0) throw InputError("cannot apportion zero votes");

  SeatVector out{std::vector<std::int64_t>(counts.size(), 0), house_size};
  // count * house / total = floor + remainder / total
  std::vector<__int128> remainder(counts.size());
  std::int64_t given = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const __int128 scaled = static_cast<__int128>(counts[i]) * house_size;
    out.seats[i] = static_cast<std::int64_t>(scaled / total);
    remainder[i] = scaled % total;
    given += out.seats[i];
  }
  std::vector<std::size_t> by_remainder(counts.size());
  std::iota(by_remainder.begin(), by_remainder.end(), 0);
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; given < house_size; ++k, ++given) {
    ++out.seats[by_remainder[k]];
  }
  return out;
}

Tally single_vote_tally(std::span<const SingleVoteBallot> ballots, std::size_t party_count) {
  Tally tally(party_count, 0);
  for (const auto& b : ballots) {
    if (b.choice.index() >= party_count) throw InputError("single vote for unknown party");
    ++tally[b.choice.index()];
  }
  return tally;
}

SeatVector pure_proportional(std::span<const SingleVoteBallot> ballots, std::size_t party_count,
                             std::int64_t house_size) {
  if (ballots.empty()) throw InputError("no single-vote ballots");
  const Tally tally = single_vote_tally(ballots, party_count);
  return seats_largest_remainder(tally, house_size);
}

void ItalicumConfig::validate() const {
  if (!(0.0 <= threshold && threshold < majority_trigger && majority_trigger < bonus_share &&
        bonus_share <= 1.0)) {
    throw InputError("Italicum config requires 0 <= threshold < trigger < bonus <= 1");
  }
}

std::int64_t round_half_up(double x) { return static_cast<std::int64_t>(std::floor(x + 0.5)); }

namespace {

// Highest tally among `candidates`; earlier list position wins ties.
std::optional<PartyId> leader(const Tally& tally, const std::vector<bool>& candidates,
                              std::optional<PartyId> excluding = std::nullopt) {
  std::optional<PartyId> best;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    if (!candidates[i] || (excluding && excluding->index() == i)) continue;
    if (!best || tally[i] > tally[best->index()]) best = PartyId(i);
  }
  return best;
}

}  // namespace

ItalicumResult italicum(std::span<const SingleVoteBallot> single_votes,
                        std::span<const RankedBallot> rankings, std::size_t party_count,
                        const ItalicumConfig& config, std::int64_t house_size) {
  config.validate();
  if (house_size <= 0) throw InputError("house size must be positive");
  if (single_votes.empty()) throw InputError("no single-vote ballots");
  const Tally votes = single_vote_tally(single_votes, party_count);
  const double total = static_cast<double>(single_votes.size());

  ItalicumResult result;
  std::vector<bool> admitted(party_count, false);
  std::size_t admitted_count = 0;
  for (std::size_t i = 0; i < party_count; ++i) {
    const double share = static_cast<double>(votes[i]) / total;
    if (votes[i] > 0 && share >= config.threshold) {
      admitted[i] = true;
      ++admitted_count;
    } else {
      result.excluded.emplace_back(i);
    }
  }
  if (admitted_count < 2) {
    throw Unresolvable("Italicum needs at least two parties above the threshold");
  }

  const PartyId first = *leader(votes, admitted);
  const PartyId second = *leader(votes, admitted, first);
  result.runoff_first = first;
  result.runoff_second = second;
  result.winner = first;
  if (static_cast<double>(votes[first.index()]) / total <= config.majority_trigger) {
    result.runoff_held = true;
    for (const RankedBallot& r : rankings) {
      if (!r.is_complete(party_count)) ++result.truncated_rankings;
      auto pos_first = std::find(r.ranking.begin(), r.ranking.end(), first);
      auto pos_second = std::find(r.ranking.begin(), r.ranking.end(), second);
      if (pos_first == r.ranking.end() && pos_second == r.ranking.end()) {
        ++result.runoff_neither;
      } else if (pos_first < pos_second) {
        ++result.runoff_votes_first;
      } else {
        ++result.runoff_votes_second;
      }
    }
    if (result.runoff_votes_second > result.runoff_votes_first) result.winner = second;
  }

  // Proportional entitlement among admitted parties decides whether the
  // bonus binds.
  Tally admitted_votes(party_count, 0);
  for (std::size_t i = 0; i < party_count; ++i) {
    if (admitted[i]) admitted_votes[i] = votes[i];
  }
  const SeatVector proportional = seats_largest_remainder(admitted_votes, house_size);
  result.bonus_seats = std::min(round_half_up(config.bonus_share * static_cast<double>(house_size)),
                                house_size);
  const std::int64_t winner_seats =
      std::max(result.bonus_seats, proportional.seats[result.winner.index()]);

  Tally others = admitted_votes;
  others[result.winner.index()] = 0;
  result.seats.house_size = house_size;
  if (winner_seats < house_size) {
    result.seats = seats_largest_remainder(others, house_size - winner_seats);
    result.seats.house_size = house_size;
  } else {
    result.seats.seats.assign(party_count, 0);
  }
  result.seats.seats[result.winner.index()] = winner_seats;
  return result;
}

}  // namespace repvote

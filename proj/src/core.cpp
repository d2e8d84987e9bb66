#include "repvote/core.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "repvote/error.hpp"

namespace repvote {

bool RankedBallot::is_complete(std::size_t party_count) const {
  if (ranking.size() != party_count) return false;
  std::vector<bool> seen(party_count, false);
  for (PartyId p : ranking) {
    if (p.index() >= party_count || seen[p.index()]) return false;
    seen[p.index()] = true;
  }
  return true;
}

Election::Election(std::vector<std::string> parties, std::vector<BallotType> types,
                   std::int64_t invalid_ballots)
    : parties_(std::move(parties)), types_(std::move(types)), invalid_ballots_(invalid_ballots) {
  if (parties_.empty()) throw InputError("election has no parties");
  if (parties_.size() > kMaxParties) {
    throw InputError("at most " + std::to_string(kMaxParties) + " parties are supported");
  }
  std::set<std::string_view> names;
  for (const auto& name : parties_) {
    if (name.empty()) throw InputError("empty party name");
    if (!names.insert(name).second) throw InputError("duplicate party name: " + name);
  }
  if (invalid_ballots_ < 0) throw InputError("negative invalid ballot count");

  const PartySet all = all_parties();
  std::sort(types_.begin(), types_.end(),
            [](const BallotType& a, const BallotType& b) { return a.approvals < b.approvals; });
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const BallotType& t = types_[i];
    if (t.approvals.empty()) throw InputError("ballot type with empty approval set");
    if (!t.approvals.subset_of(all)) throw InputError("ballot type references unknown party");
    if (t.count < 0) throw InputError("negative ballot count");
    if (i > 0 && types_[i - 1].approvals == t.approvals) {
      throw InputError("duplicate approval set among ballot types");
    }
    for (const auto& [party, names_for_party] : t.preferences) {
      if (!t.approvals.contains(party)) {
        throw InputError("candidate preference for a party the ballot does not approve");
      }
      std::int64_t named = 0;
      for (const auto& [_, n] : names_for_party) {
        if (n < 0) throw InputError("negative candidate count");
        named += n;
      }
      if (named > t.count) throw InputError("more candidate preferences than ballots");
    }
    total_voters_ += t.count;
  }
}

std::optional<PartyId> Election::find_party(std::string_view name) const {
  auto it = std::find(parties_.begin(), parties_.end(), name);
  if (it == parties_.end()) return std::nullopt;
  return PartyId(static_cast<std::size_t>(it - parties_.begin()));
}

PartyId Election::party(std::string_view name) const {
  if (auto p = find_party(name)) return *p;
  throw InputError("unknown party: " + std::string(name));
}

Election validate_election(std::vector<std::string> parties, std::span<const RawBallot> ballots) {
  std::unordered_map<std::string, PartyId> index;
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (!index.emplace(parties[i], PartyId(i)).second) {
      throw InputError("duplicate party name: " + parties[i]);
    }
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw InputError("unknown party: " + name);
    return it->second;
  };

  std::map<std::uint64_t, BallotType> merged;
  std::int64_t invalid = 0;
  for (const RawBallot& raw : ballots) {
    if (raw.count < 0) throw InputError("negative ballot count");
    PartySet approvals;
    for (const auto& name : raw.approvals) approvals.insert(lookup(name));
    if (approvals.empty()) {
      invalid += raw.count;
      continue;
    }
    BallotType& t = merged[approvals.bits()];
    t.approvals = approvals;
    t.count += raw.count;
    for (const auto& [name, counts] : raw.candidates) {
      PartyId p = lookup(name);
      if (!approvals.contains(p)) {
        throw InputError("candidate named for unapproved party: " + name);
      }
      for (const auto& [candidate, n] : counts) t.preferences[p][candidate] += n;
    }
  }

  std::vector<BallotType> types;
  types.reserve(merged.size());
  for (auto& [_, t] : merged) types.push_back(std::move(t));
  return Election(std::move(parties), std::move(types), invalid);
}

Tally tally_remaining(const Election& election, PartySet removed) {
  Tally tally(election.party_count(), 0);
  for (const BallotType& t : election.ballot_types()) {
    if (t.approvals.intersects(removed)) continue;
    t.approvals.for_each([&](PartyId p) { tally[p.index()] += t.count; });
  }
  return tally;
}

std::int64_t only_voted_count(const Election& election, PartyId party) {
  const PartySet only = PartySet::single(party);
  for (const BallotType& t : election.ballot_types()) {
    if (t.approvals == only) return t.count;
  }
  return 0;
}

std::int64_t total_approvals(const Election& election, PartyId party) {
  std::int64_t n = 0;
  for (const BallotType& t : election.ballot_types()) {
    if (t.approvals.contains(party)) n += t.count;
  }
  return n;
}

}  // namespace repvote

#include "repvote/assign.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "repvote/apportion.hpp"
#include "repvote/error.hpp"
#include "repvote/seeding.hpp"

namespace repvote {

namespace {

Assignment empty_assignment(const Election& e) {
  Assignment a;
  a.assigned.assign(e.party_count(), 0);
  a.per_type.assign(e.ballot_types().size(), std::vector<std::int64_t>(e.party_count(), 0));
  return a;
}

std::vector<std::int64_t> initial_remaining(const Election& e) {
  std::vector<std::int64_t> r;
  r.reserve(e.ballot_types().size());
  for (const auto& t : e.ballot_types()) r.push_back(t.count);
  return r;
}

std::vector<PartySet> initial_effective(const Election& e) {
  std::vector<PartySet> r;
  r.reserve(e.ballot_types().size());
  for (const auto& t : e.ballot_types()) r.push_back(t.approvals);
  return r;
}

Tally pool_tally(std::size_t party_count, std::span<const std::int64_t> remaining,
                 std::span<const PartySet> effective) {
  Tally tally(party_count, 0);
  for (std::size_t t = 0; t < remaining.size(); ++t) {
    if (remaining[t] == 0) continue;
    effective[t].for_each([&](PartyId p) { tally[p.index()] += remaining[t]; });
  }
  return tally;
}

bool pool_empty(std::span<const std::int64_t> remaining) {
  return std::all_of(remaining.begin(), remaining.end(), [](std::int64_t r) { return r == 0; });
}

void give(Assignment& a, std::size_t type, PartyId p, std::int64_t n) {
  a.per_type[type][p.index()] += n;
  a.assigned[p.index()] += n;
}

std::int64_t absorb(std::vector<std::int64_t>& remaining, std::span<const PartySet> effective,
                    Assignment& a, PartyId p) {
  std::int64_t taken = 0;
  for (std::size_t t = 0; t < remaining.size(); ++t) {
    if (remaining[t] == 0 || !effective[t].contains(p)) continue;
    give(a, t, p, remaining[t]);
    taken += remaining[t];
    remaining[t] = 0;
  }
  return taken;
}

// Ballots approving only one of the pair go to it; shared ballots are split
// evenly, the odd one to `first` (the earlier party in list order).
std::int64_t absorb_split(std::vector<std::int64_t>& remaining, std::span<const PartySet> effective,
                          Assignment& a, PartyId first, PartyId second) {
  std::int64_t shared = 0;
  for (std::size_t t = 0; t < remaining.size(); ++t) {
    if (remaining[t] > 0 && effective[t].contains(first) && effective[t].contains(second)) {
      shared += remaining[t];
    }
  }
  std::int64_t quota_first = (shared + 1) / 2;
  std::int64_t taken = 0;
  for (std::size_t t = 0; t < remaining.size(); ++t) {
    if (remaining[t] == 0) continue;
    const bool has_first = effective[t].contains(first);
    const bool has_second = effective[t].contains(second);
    if (has_first && has_second) {
      const std::int64_t to_first = std::min(remaining[t], quota_first);
      quota_first -= to_first;
      give(a, t, first, to_first);
      give(a, t, second, remaining[t] - to_first);
    } else if (has_first) {
      give(a, t, first, remaining[t]);
    } else if (has_second) {
      give(a, t, second, remaining[t]);
    } else {
      continue;
    }
    taken += remaining[t];
    remaining[t] = 0;
  }
  return taken;
}

// Highest-scoring party in `candidates`; earlier list position wins ties.
std::optional<PartyId> best_of(std::span<const std::int64_t> scores, PartySet candidates) {
  std::optional<PartyId> best;
  candidates.for_each([&](PartyId p) {
    if (!best || scores[p.index()] > scores[best->index()]) best = p;
  });
  return best;
}

PartySet parties_at(std::span<const std::int64_t> scores, PartySet eligible, std::int64_t value) {
  PartySet out;
  eligible.for_each([&](PartyId p) {
    if (scores[p.index()] == value) out.insert(p);
  });
  return out;
}

std::int64_t max_over(std::span<const std::int64_t> scores, PartySet eligible) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  eligible.for_each([&](PartyId p) { best = std::max(best, scores[p.index()]); });
  return best;
}

}  // namespace

void TiePolicy::validate(std::size_t party_count) const {
  if (!authority_order.empty()) require_permutation(authority_order, party_count);
}

std::string_view to_string(TiePolicy::Kind kind) {
  switch (kind) {
    case TiePolicy::Kind::kSplit: return "split";
    case TiePolicy::Kind::kAuthority: return "authority";
    case TiePolicy::Kind::kSkip: return "skip";
  }
  return "authority";
}

TiePolicy::Kind parse_tie_kind(std::string_view name) {
  if (name == "split") return TiePolicy::Kind::kSplit;
  if (name == "authority") return TiePolicy::Kind::kAuthority;
  if (name == "skip") return TiePolicy::Kind::kSkip;
  throw InputError("unknown tie policy: " + std::string(name));
}

void CapConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw InputError("cap threshold must be in (0, 1]");
}

void require_permutation(std::span<const PartyId> order, std::size_t party_count) {
  if (order.size() != party_count) throw InputError("order must list every party exactly once");
  std::vector<bool> seen(party_count, false);
  for (PartyId p : order) {
    if (p.index() >= party_count || seen[p.index()]) {
      throw InputError("order must list every party exactly once");
    }
    seen[p.index()] = true;
  }
}

std::vector<PartyId> complete_order(std::span<const PartyId> prefix, std::size_t party_count) {
  std::vector<PartyId> order(prefix.begin(), prefix.end());
  std::vector<bool> seen(party_count, false);
  for (PartyId p : prefix) {
    if (p.index() >= party_count || seen[p.index()]) throw InputError("invalid order prefix");
    seen[p.index()] = true;
  }
  for (std::size_t i = 0; i < party_count; ++i) {
    if (!seen[i]) order.emplace_back(i);
  }
  return order;
}

TieResolution resolve_tie(std::span<const std::int64_t> scores, PartySet tied,
                          const TiePolicy& policy, PartySet eligible) {
  TieResolution out;
  switch (policy.kind) {
    case TiePolicy::Kind::kSplit:
      if (tied.size() != 2) {
        throw Unresolvable("split tie among " + std::to_string(tied.size()) +
                           " parties is not supported");
      }
      out.selected = tied.members();
      out.split = true;
      return out;
    case TiePolicy::Kind::kAuthority:
      if (policy.authority_order.empty()) {
        out.selected = {tied.first()};
      } else {
        for (PartyId p : policy.authority_order) {
          if (tied.contains(p)) {
            out.selected = {p};
            break;
          }
        }
      }
      return out;
    case TiePolicy::Kind::kSkip: {
      PartySet others;
      eligible.without(tied).for_each([&](PartyId p) {
        if (scores[p.index()] > 0) others.insert(p);
      });
      if (auto next = best_of(scores, others)) {
        out.selected = {*next};
      } else {
        out.selected = {tied.first()};
        out.fallback = true;
      }
      return out;
    }
  }
  return out;
}

GreedyStepper::GreedyStepper(const Election& election, TiePolicy policy, std::optional<CapConfig> cap)
    : election_(&election),
      policy_(std::move(policy)),
      cap_(std::move(cap)),
      remaining_(initial_remaining(election)),
      effective_(initial_effective(election)),
      result_(empty_assignment(election)) {
  policy_.validate(election.party_count());
  if (cap_) {
    cap_->validate();
    if (policy_.kind == TiePolicy::Kind::kSplit) {
      throw InputError("split ties cannot be combined with a cap");
    }
    rng_.seed(cap_->rng_seed);
    CapReport report;
    report.threshold = cap_->threshold;
    report.rng_seed = cap_->rng_seed;
    report.limit = static_cast<std::int64_t>(
        std::floor(cap_->threshold * static_cast<double>(election.total_voters()) + 1e-9));
    result_.cap = report;
  }
}

bool GreedyStepper::done() const { return pool_empty(remaining_); }

Tally GreedyStepper::remaining_tally() const {
  return pool_tally(election_->party_count(), remaining_, effective_);
}

std::optional<std::vector<PartyId>> GreedyStepper::pending_tie() const {
  if (done()) return std::nullopt;
  const Tally tally = remaining_tally();
  const PartySet eligible = election_->all_parties().without(selected_);
  const PartySet tied = parties_at(tally, eligible, max_over(tally, eligible));
  if (tied.size() < 2) return std::nullopt;
  return tied.members();
}

const Round& GreedyStepper::step() { return resolve_current(policy_); }

const Round& GreedyStepper::resolve_current(const TiePolicy& policy) {
  if (done()) throw InputError("no ballots left to assign");
  const Tally tally = remaining_tally();
  const PartySet eligible = election_->all_parties().without(selected_);
  const std::int64_t top = max_over(tally, eligible);
  const PartySet tied = parties_at(tally, eligible, top);
  if (tied.size() == 1) return apply(TieResolution{{tied.first()}, false, false}, std::nullopt);

  TieResolution resolution = resolve_tie(tally, tied, policy, eligible);
  TieEvent event;
  event.tied = tied.members();
  event.score = top;
  event.policy = policy.kind;
  event.selected = resolution.selected;
  event.fallback = resolution.fallback;
  return apply(resolution, event);
}

const Round& GreedyStepper::step_select(PartyId party) {
  if (done()) throw InputError("no ballots left to assign");
  if (party.index() >= election_->party_count()) throw InputError("unknown party index");
  const Tally tally = remaining_tally();
  const PartySet eligible = election_->all_parties().without(selected_);
  const std::int64_t top = max_over(tally, eligible);
  const PartySet tied = parties_at(tally, eligible, top);
  if (!tied.contains(party)) throw InputError("selected party does not hold the maximum tally");
  if (tied.size() == 1) return apply(TieResolution{{party}, false, false}, std::nullopt);
  TieEvent event;
  event.tied = tied.members();
  event.score = top;
  event.policy = TiePolicy::Kind::kAuthority;
  event.selected = {party};
  return apply(TieResolution{{party}, false, false}, event);
}

const Round& GreedyStepper::step_force(PartyId party) {
  if (done()) throw InputError("no ballots left to assign");
  if (party.index() >= election_->party_count()) throw InputError("unknown party index");
  if (selected_.contains(party)) throw InputError("party already absorbed its ballots");
  return apply(TieResolution{{party}, false, false}, std::nullopt);
}

const Round& GreedyStepper::step_split() {
  if (!pending_tie()) throw InputError("no tie to split");
  if (cap_) throw InputError("split ties cannot be combined with a cap");
  return resolve_current(TiePolicy::split());
}

const Round& GreedyStepper::step_skip() {
  if (!pending_tie()) throw InputError("no tie to skip");
  return resolve_current(TiePolicy::skip());
}

const Round& GreedyStepper::apply(const TieResolution& resolution, std::optional<TieEvent> event) {
  Round round;
  round.remaining = remaining_tally();
  round.selected = resolution.selected;
  const std::size_t index = result_.rounds.size();

  if (resolution.split) {
    round.absorbed = absorb_split(remaining_, effective_, result_, resolution.selected[0],
                                  resolution.selected[1]);
  } else {
    const PartyId p = resolution.selected.front();
    if (!cap_) {
      round.absorbed = absorb(remaining_, effective_, result_, p);
    } else {
      CapReport& report = *result_.cap;
      std::int64_t forced = 0;
      std::int64_t optional_total = 0;
      for (std::size_t t = 0; t < remaining_.size(); ++t) {
        if (remaining_[t] == 0 || !effective_[t].contains(p)) continue;
        (effective_[t] == PartySet::single(p) ? forced : optional_total) += remaining_[t];
      }
      if (forced + optional_total <= report.limit) {
        round.absorbed = absorb(remaining_, effective_, result_, p);
      } else {
        if (forced > report.limit) report.violations.push_back(p);
        report.capped.push_back(p);
        std::int64_t need = std::max<std::int64_t>(0, report.limit - forced);
        std::int64_t pool_left = optional_total;
        for (std::size_t t = 0; t < remaining_.size(); ++t) {
          if (remaining_[t] == 0 || !effective_[t].contains(p)) continue;
          std::int64_t take = 0;
          if (effective_[t] == PartySet::single(p)) {
            take = remaining_[t];
          } else {
            // Selection sampling: each ballot is taken with probability
            // need / pool_left, giving a uniform subset of size `need`.
            for (std::int64_t i = 0; i < remaining_[t]; ++i, --pool_left) {
              if (need > 0 &&
                  uniform_below(rng_, static_cast<std::uint64_t>(pool_left)) <
                      static_cast<std::uint64_t>(need)) {
                ++take;
                --need;
              }
            }
            effective_[t].erase(p);
          }
          give(result_, t, p, take);
          remaining_[t] -= take;
          round.absorbed += take;
        }
      }
    }
  }

  for (PartyId p : resolution.selected) {
    selected_.insert(p);
    result_.order.push_back(p);
  }
  result_.rounds.push_back(std::move(round));
  if (event) {
    event->round = index;
    result_.ties.push_back(std::move(*event));
  }
  return result_.rounds.back();
}

Assignment GreedyStepper::finish() {
  while (!done()) step();
  return result_;
}

Assignment assign_greedy(const Election& election, const TiePolicy& policy) {
  return GreedyStepper(election, policy).finish();
}

Assignment assign_with_cap(const Election& election, const CapConfig& cap, const TiePolicy& policy) {
  return GreedyStepper(election, policy, cap).finish();
}

Assignment assign_by_order(const Election& election, std::span<const PartyId> party_order) {
  require_permutation(party_order, election.party_count());
  Assignment a = empty_assignment(election);
  std::vector<std::int64_t> remaining = initial_remaining(election);
  const std::vector<PartySet> effective = initial_effective(election);
  a.order.assign(party_order.begin(), party_order.end());
  for (PartyId p : party_order) {
    if (pool_empty(remaining)) break;
    Round round;
    round.remaining = pool_tally(election.party_count(), remaining, effective);
    round.selected = {p};
    round.absorbed = absorb(remaining, effective, a, p);
    a.rounds.push_back(std::move(round));
  }
  return a;
}

Tally assigned_by_order(const Election& election, std::span<const PartyId> party_order) {
  std::array<std::uint8_t, kMaxParties> rank{};
  for (std::size_t i = 0; i < party_order.size(); ++i) {
    rank[party_order[i].index()] = static_cast<std::uint8_t>(i);
  }
  Tally assigned(election.party_count(), 0);
  for (const BallotType& t : election.ballot_types()) {
    PartyId owner = t.approvals.first();
    t.approvals.for_each([&](PartyId p) {
      if (rank[p.index()] < rank[owner.index()]) owner = p;
    });
    assigned[owner.index()] += t.count;
  }
  return assigned;
}

TwoHouseResult assign_two_house(const Election& commons, const Election& senate,
                                const TiePolicy& policy) {
  if (commons.parties() != senate.parties()) {
    throw InputError("both houses must share the same party list");
  }
  const std::size_t n = commons.party_count();
  policy.validate(n);

  TwoHouseResult out;
  out.commons = empty_assignment(commons);
  out.senate = empty_assignment(senate);
  std::vector<std::int64_t> rem_c = initial_remaining(commons);
  std::vector<std::int64_t> rem_s = initial_remaining(senate);
  const std::vector<PartySet> eff_c = initial_effective(commons);
  const std::vector<PartySet> eff_s = initial_effective(senate);
  PartySet selected;

  while (!pool_empty(rem_c) || !pool_empty(rem_s)) {
    const Tally tc = pool_tally(n, rem_c, eff_c);
    const Tally ts = pool_tally(n, rem_s, eff_s);
    Tally score(n, 0);
    PartySet eligible;
    for (std::size_t i = 0; i < n; ++i) {
      score[i] = std::min(tc[i], ts[i]);
      if (!selected.contains(PartyId(i)) && tc[i] + ts[i] > 0) eligible.insert(PartyId(i));
    }
    std::int64_t top = max_over(score, eligible);
    if (top == 0) {
      for (std::size_t i = 0; i < n; ++i) score[i] = tc[i] + ts[i];
      top = max_over(score, eligible);
    }
    const PartySet tied = parties_at(score, eligible, top);

    TieResolution resolution{{tied.first()}, false, false};
    if (tied.size() > 1) {
      resolution = resolve_tie(score, tied, policy, eligible);
      TieEvent event;
      event.round = out.order.size();
      event.tied = tied.members();
      event.score = top;
      event.policy = policy.kind;
      event.selected = resolution.selected;
      event.fallback = resolution.fallback;
      out.ties.push_back(std::move(event));
    }

    Round round_c{tc, resolution.selected, 0};
    Round round_s{ts, resolution.selected, 0};
    if (resolution.split) {
      round_c.absorbed = absorb_split(rem_c, eff_c, out.commons, resolution.selected[0],
                                      resolution.selected[1]);
      round_s.absorbed = absorb_split(rem_s, eff_s, out.senate, resolution.selected[0],
                                      resolution.selected[1]);
    } else {
      round_c.absorbed = absorb(rem_c, eff_c, out.commons, resolution.selected[0]);
      round_s.absorbed = absorb(rem_s, eff_s, out.senate, resolution.selected[0]);
    }
    for (PartyId p : resolution.selected) {
      selected.insert(p);
      out.order.push_back(p);
    }
    out.scores.push_back(std::move(score));
    out.commons.rounds.push_back(std::move(round_c));
    out.senate.rounds.push_back(std::move(round_s));
  }
  out.commons.order = out.order;
  out.senate.order = out.order;
  return out;
}

std::vector<CandidateCounts> candidate_tallies(const Election& election, const Assignment& assignment) {
  std::vector<CandidateCounts> out(election.party_count());
  const auto& types = election.ballot_types();
  if (assignment.per_type.size() != types.size()) {
    throw InputError("assignment does not belong to this election");
  }
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (const auto& [party, names] : types[t].preferences) {
      const std::int64_t share = assignment.per_type[t][party.index()];
      if (share == 0) continue;
      if (share == types[t].count) {
        for (const auto& [name, n] : names) out[party.index()][name] += n;
        continue;
      }
      // Buckets: each named candidate, then ballots naming nobody.
      std::vector<std::int64_t> buckets;
      std::int64_t named = 0;
      for (const auto& [_, n] : names) {
        buckets.push_back(n);
        named += n;
      }
      buckets.push_back(types[t].count - named);
      const SeatVector split = seats_largest_remainder(buckets, share);
      std::size_t k = 0;
      for (const auto& [name, _] : names) {
        if (split.seats[k] > 0) out[party.index()][name] += split.seats[k];
        ++k;
      }
    }
  }
  return out;
}

}  // namespace repvote

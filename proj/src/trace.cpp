#include "repvote/trace.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "repvote/error.hpp"

namespace repvote {

namespace {

std::vector<std::string> names_of(const Election& e, std::span<const PartyId> parties) {
  std::vector<std::string> out;
  for (PartyId p : parties) out.push_back(e.party_name(p));
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Cell grid shared by the text and CSV renderers.
struct TraceGrid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

TraceGrid build_grid(const Election& e, const Assignment& a, bool marks) {
  const std::size_t n = e.party_count();
  TraceGrid g;
  g.header.push_back("round");
  for (const auto& name : e.parties()) g.header.push_back(name);
  if (!marks) {
    g.header.push_back("selected");
    g.header.push_back("absorbed");
  }
  std::vector<bool> served(n, false);
  for (std::size_t r = 0; r < a.rounds.size(); ++r) {
    const Round& round = a.rounds[r];
    const bool split = round.selected.size() > 1;
    std::vector<std::string> row{std::to_string(r + 1)};
    for (std::size_t i = 0; i < n; ++i) {
      if (served[i]) {
        row.emplace_back();
        continue;
      }
      std::string cell = std::to_string(round.remaining[i]);
      const bool chosen = std::find(round.selected.begin(), round.selected.end(), PartyId(i)) !=
                          round.selected.end();
      if (marks && chosen) cell += split ? "=" : "*";
      row.push_back(std::move(cell));
    }
    if (!marks) {
      row.push_back(join(names_of(e, round.selected), ";"));
      row.push_back(std::to_string(round.absorbed));
    }
    for (PartyId p : round.selected) served[p.index()] = true;
    g.rows.push_back(std::move(row));
  }
  std::vector<std::string> last{"assigned"};
  for (std::int64_t x : a.assigned) last.push_back(std::to_string(x));
  if (!marks) {
    last.emplace_back();
    last.push_back(std::to_string(e.total_voters()));
  }
  g.rows.push_back(std::move(last));
  return g;
}

std::string render_text(const TraceGrid& g) {
  std::vector<std::size_t> width(g.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  widen(g.header);
  for (const auto& row : g.rows) widen(row);
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    std::string text;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        text += row[i] + std::string(width[i] - row[i].size(), ' ');
      } else {
        text += "  " + std::string(width[i] - row[i].size(), ' ') + row[i];
      }
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  };
  line(g.header);
  for (const auto& row : g.rows) line(row);
  return out.str();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string render_csv(const TraceGrid& g) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  };
  line(g.header);
  for (const auto& row : g.rows) line(row);
  return out.str();
}

nlohmann::json seats_to_json(const Election& e, const SeatVector& seats) {
  nlohmann::json j;
  j["house_size"] = seats.house_size;
  j["seats"] = seats.seats;
  nlohmann::json named = nlohmann::json::object();
  for (std::size_t i = 0; i < seats.seats.size(); ++i) named[e.parties()[i]] = seats.seats[i];
  j["by_party"] = std::move(named);
  return j;
}

}  // namespace

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "text") return TraceFormat::kText;
  if (name == "csv") return TraceFormat::kCsv;
  if (name == "json") return TraceFormat::kJson;
  throw InputError("unknown format: " + std::string(name));
}

std::string emit_trace(const Election& election, const Assignment& assignment, TraceFormat format) {
  switch (format) {
    case TraceFormat::kText: return render_text(build_grid(election, assignment, true));
    case TraceFormat::kCsv: return render_csv(build_grid(election, assignment, false));
    case TraceFormat::kJson: return assignment_to_json(election, assignment).dump(2) + "\n";
  }
  return {};
}

nlohmann::json assignment_to_json(const Election& e, const Assignment& a) {
  nlohmann::json j;
  j["parties"] = e.parties();
  j["total_voters"] = e.total_voters();
  j["assigned"] = a.assigned;
  j["order"] = names_of(e, a.order);
  nlohmann::json rounds = nlohmann::json::array();
  for (const Round& r : a.rounds) {
    rounds.push_back({{"remaining", r.remaining},
                      {"selected", names_of(e, r.selected)},
                      {"split", r.selected.size() > 1},
                      {"absorbed", r.absorbed}});
  }
  j["rounds"] = std::move(rounds);
  nlohmann::json ties = nlohmann::json::array();
  for (const TieEvent& t : a.ties) {
    ties.push_back({{"round", t.round + 1},
                    {"tied", names_of(e, t.tied)},
                    {"score", t.score},
                    {"policy", to_string(t.policy)},
                    {"selected", names_of(e, t.selected)},
                    {"fallback", t.fallback}});
  }
  j["ties"] = std::move(ties);
  if (a.cap) {
    j["cap"] = {{"threshold", a.cap->threshold},
                {"rng_seed", a.cap->rng_seed},
                {"limit", a.cap->limit},
                {"capped", names_of(e, a.cap->capped)},
                {"violations", names_of(e, a.cap->violations)}};
  }
  nlohmann::json per_type = nlohmann::json::array();
  for (std::size_t t = 0; t < e.ballot_types().size(); ++t) {
    const BallotType& type = e.ballot_types()[t];
    std::vector<std::string> approvals;
    type.approvals.for_each([&](PartyId p) { approvals.push_back(e.party_name(p)); });
    per_type.push_back({{"approvals", approvals}, {"count", type.count}, {"split", a.per_type[t]}});
  }
  j["per_type"] = std::move(per_type);
  return j;
}

std::vector<std::string> assignment_diagnostics(const Election& e, const Assignment& a) {
  std::vector<std::string> notes;
  for (const TieEvent& t : a.ties) {
    std::string note = "round " + std::to_string(t.round + 1) + ": tie at " + std::to_string(t.score) +
                       " between " + join(names_of(e, t.tied), ", ") + " resolved by " +
                       std::string(to_string(t.policy)) + " -> " + join(names_of(e, t.selected), " = ");
    if (t.fallback) note += " (no other party left to skip to; list order used)";
    notes.push_back(std::move(note));
  }
  if (a.cap) {
    for (PartyId p : a.cap->capped) {
      notes.push_back("cap " + std::to_string(a.cap->limit) + " applied to " + e.party_name(p));
    }
    for (PartyId p : a.cap->violations) {
      notes.push_back("cap cannot be honored for " + e.party_name(p) +
                      ": ballots approving only it exceed the limit");
    }
  }
  if (e.invalid_ballots() > 0) {
    notes.push_back(std::to_string(e.invalid_ballots()) + " invalid (empty) ballots excluded");
  }
  return notes;
}

std::string render_report(const RunReport& report, TraceFormat format) {
  if (format == TraceFormat::kJson) {
    nlohmann::json j;
    j["method"] = report.method;
    j["config"] = report.config;
    nlohmann::json houses = nlohmann::json::array();
    for (const HouseReport& h : report.houses) {
      nlohmann::json jh;
      jh["label"] = h.label;
      jh["trace"] = assignment_to_json(*h.election, h.assignment);
      if (h.seats) jh["seats"] = seats_to_json(*h.election, *h.seats);
      houses.push_back(std::move(jh));
    }
    j["houses"] = std::move(houses);
    j["diagnostics"] = report.diagnostics;
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == TraceFormat::kCsv) {
    for (const HouseReport& h : report.houses) {
      out << "# " << report.method << ' ' << h.label << '\n';
      out << emit_trace(*h.election, h.assignment, TraceFormat::kCsv);
      if (h.seats) {
        out << "seats";
        for (std::int64_t s : h.seats->seats) out << ',' << s;
        out << ",," << h.seats->house_size << '\n';
      }
    }
    return out.str();
  }

  out << "method: " << report.method << '\n';
  out << "config: " << report.config.dump() << '\n';
  for (const HouseReport& h : report.houses) {
    out << '\n' << "[" << h.label << "]\n";
    out << emit_trace(*h.election, h.assignment, TraceFormat::kText);
    if (h.seats) {
      out << "seats (" << h.seats->house_size << "):";
      for (std::size_t i = 0; i < h.seats->seats.size(); ++i) {
        out << ' ' << h.election->parties()[i] << '=' << h.seats->seats[i];
      }
      out << '\n';
    }
  }
  if (!report.diagnostics.empty()) {
    out << "\ndiagnostics:\n";
    for (const auto& d : report.diagnostics) out << "  - " << d << '\n';
  }
  return out.str();
}

}  // namespace repvote

namespace repvote {

Comparison compare_systems(const Election& election, std::span<const SingleVoteBallot> single_votes,
                           std::span<const RankedBallot> rankings, std::int64_t house_size,
                           const ItalicumConfig& config) {
  if (single_votes.empty()) throw InputError("comparison needs single-vote records");
  Comparison c;
  c.house_size = house_size;
  c.proportional = pure_proportional(single_votes, election.party_count(), house_size);
  c.italicum = italicum(single_votes, rankings, election.party_count(), config, house_size);
  c.greedy = assign_greedy(election);
  c.greedy_seats = seats_largest_remainder(c.greedy.assigned, house_size);
  return c;
}

nlohmann::json comparison_to_json(const Election& e, const Comparison& c) {
  nlohmann::json j;
  j["parties"] = e.parties();
  j["house_size"] = c.house_size;
  j["proportional"] = c.proportional.seats;
  const ItalicumResult& it = c.italicum;
  j["italicum"] = {{"seats", it.seats.seats},
                   {"winner", e.party_name(it.winner)},
                   {"bonus_seats", it.bonus_seats},
                   {"runoff_held", it.runoff_held},
                   {"excluded", names_of(e, it.excluded)}};
  if (it.runoff_held) {
    j["italicum"]["runoff"] = {{"finalists", {e.party_name(it.runoff_first), e.party_name(it.runoff_second)}},
                               {"votes", {it.runoff_votes_first, it.runoff_votes_second}},
                               {"neither", it.runoff_neither},
                               {"truncated_rankings", it.truncated_rankings}};
  }
  j["greedy"] = {{"assigned", c.greedy.assigned},
                 {"order", names_of(e, c.greedy.order)},
                 {"seats", c.greedy_seats.seats}};
  return j;
}

std::string render_comparison(const Election& e, const Comparison& c, TraceFormat format) {
  if (format == TraceFormat::kJson) return comparison_to_json(e, c).dump(2) + "\n";
  TraceGrid g;
  g.header = {"system"};
  for (const auto& p : e.parties()) g.header.push_back(p);
  auto add = [&](std::string label, const std::vector<std::int64_t>& seats) {
    std::vector<std::string> row{std::move(label)};
    for (std::int64_t s : seats) row.push_back(std::to_string(s));
    g.rows.push_back(std::move(row));
  };
  add("proportional", c.proportional.seats);
  add("italicum", c.italicum.seats.seats);
  add("greedy", c.greedy_seats.seats);
  if (format == TraceFormat::kCsv) return render_csv(g);
  std::ostringstream out;
  out << "house size: " << c.house_size << '\n' << render_text(g);
  out << "italicum winner: " << e.party_name(c.italicum.winner);
  if (c.italicum.runoff_held) {
    out << " (runoff " << e.party_name(c.italicum.runoff_first) << ' ' << c.italicum.runoff_votes_first
        << " vs " << e.party_name(c.italicum.runoff_second) << ' ' << c.italicum.runoff_votes_second << ')';
  }
  out << '\n';
  return out.str();
}

nlohmann::json rank_size_to_json(const RankSizeReport& r) {
  nlohmann::json j;
  j["config"] = {{"parties", r.config.n_parties},
                 {"voters", r.config.n_voters},
                 {"runs", r.config.n_runs},
                 {"k", r.config.k},
                 {"master_seed", r.config.master_seed},
                 {"seat_house", r.config.seat_house},
                 {"probability", "max(0, 1 - d)^k"},
                 {"seed_scheme", kRunSeedScheme}};
  j["mean"] = r.mean;
  j["sd"] = r.sd;
  j["fit"] = {{"decay", r.fit.decay},
              {"intercept", r.fit.intercept},
              {"r_squared", r.fit.r_squared},
              {"ranks_used", r.fit.ranks_used}};
  j["dropped_voters"] = r.dropped_voters;
  j["resampled_voters"] = r.resampled_voters;
  j["run_seeds"] = r.run_seeds;
  return j;
}

std::string rank_size_csv(const RankSizeReport& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "# parties=" << r.config.n_parties << " voters=" << r.config.n_voters << " runs=" << r.config.n_runs
      << " k=" << r.config.k << " seed=" << r.config.master_seed << '\n';
  out << "# fit decay=" << r.fit.decay << " r2=" << r.fit.r_squared << '\n';
  out << "rank,mean,sd\n";
  for (std::size_t i = 0; i < r.mean.size(); ++i) out << i + 1 << ',' << r.mean[i] << ',' << r.sd[i] << '\n';
  return out.str();
}

std::string render_rank_size(const RankSizeReport& r, TraceFormat format) {
  switch (format) {
    case TraceFormat::kJson: return rank_size_to_json(r).dump(2) + "\n";
    case TraceFormat::kCsv: return rank_size_csv(r);
    case TraceFormat::kText: break;
  }
  std::ostringstream out;
  out << "parties " << r.config.n_parties << ", voters " << r.config.n_voters << ", runs " << r.config.n_runs
      << ", k " << r.config.k << ", seed " << r.config.master_seed << '\n';
  out << std::fixed << std::setprecision(4);
  out << "rank    mean      sd\n";
  for (std::size_t i = 0; i < r.mean.size(); ++i) {
    out << std::setw(4) << i + 1 << "  " << r.mean[i] << "  " << r.sd[i] << '\n';
  }
  out << "exponential fit: decay " << r.fit.decay << " per rank, R^2 " << r.fit.r_squared << '\n';
  if (r.dropped_voters > 0) out << "dropped voters: " << r.dropped_voters << '\n';
  return out.str();
}

nlohmann::json vertices_to_json(const Election& e, const AchievableSet& set) {
  return {{"parties", e.parties()},
          {"vertices", set.vertices},
          {"exhaustive", set.exhaustive},
          {"orderings_evaluated", set.orderings_evaluated},
          {"sample_seed", set.sample_seed}};
}

nlohmann::json feasibility_to_json(const Election& e, const FeasibilityResult& r) {
  nlohmann::json j{{"feasible", r.feasible}};
  if (r.feasible) j["certificate"] = r.certificate;
  if (r.violated_subset) {
    std::vector<std::string> names;
    r.violated_subset->for_each([&](PartyId p) { names.push_back(e.party_name(p)); });
    j["violated_subset"] = names;
  }
  return j;
}

}  // namespace repvote

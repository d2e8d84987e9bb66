#include "repvote/service.hpp"

#include <sstream>

#include <httplib.h>

#include "repvote/error.hpp"
#include "repvote/sim.hpp"
#include "repvote/space.hpp"
#include "repvote/trace.hpp"

namespace repvote {

namespace {

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs a handler and maps exceptions to HTTP statuses.
template <typename F>
auto guarded(F handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const NotFound& e) {
      reply(res, 404, {{"error", e.what()}});
    } catch (const TooLarge& e) {
      reply(res, 413, {{"error", e.what()}});
    } catch (const Unresolvable& e) {
      reply(res, 422, {{"error", e.what()}});
    } catch (const InputError& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
    }
  };
}

nlohmann::json body_json(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  nlohmann::json j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("request body must be a JSON object");
  return j;
}

std::vector<PartyId> party_list(const Election& e, const nlohmann::json& names) {
  if (!names.is_array()) throw InputError("expected an array of party names");
  std::vector<PartyId> out;
  for (const auto& n : names) {
    if (n.is_string()) {
      out.push_back(e.party(n.get<std::string>()));
    } else if (n.is_number_integer() && n.get<std::int64_t>() >= 0 &&
               static_cast<std::size_t>(n.get<std::int64_t>()) < e.party_count()) {
      out.emplace_back(static_cast<std::size_t>(n.get<std::int64_t>()));
    } else {
      throw InputError("order entries must be party names or indices");
    }
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::int64_t x = 0;
    try {
      x = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw InputError("malformed integer list: " + text);
    }
    if (used != item.size()) throw InputError("malformed integer list: " + text);
    out.push_back(x);
  }
  return out;
}

TiePolicy policy_from(const Election& e, const nlohmann::json& body) {
  TiePolicy policy;
  policy.kind = parse_tie_kind(body.value("tie", std::string("authority")));
  if (body.contains("authority_order")) policy.authority_order = party_list(e, body.at("authority_order"));
  policy.validate(e.party_count());
  return policy;
}

nlohmann::json election_summary(const StoredElection& s) {
  nlohmann::json j = election_to_json(s.election);
  j["id"] = s.id;
  j["total_voters"] = s.election.total_voters();
  j["invalid_ballots"] = s.election.invalid_ballots();
  j["single_votes"] = s.single_votes.size();
  j["rankings"] = s.rankings.size();
  return j;
}

}  // namespace

ElectionService::ElectionService(ServiceLimits limits) : limits_(limits) {}

std::shared_ptr<const StoredElection> ElectionService::add(BallotFile file) {
  auto stored = std::make_shared<StoredElection>();
  stored->election = to_election(file);
  stored->single_votes = single_votes(file, stored->election);
  stored->rankings = rankings(file, stored->election);
  stored->file = std::move(file);
  std::unique_lock lock(elections_mutex_);
  stored->id = "e" + std::to_string(next_election_++);
  elections_.emplace(stored->id, stored);
  return stored;
}

std::shared_ptr<const StoredElection> ElectionService::find(const std::string& id) const {
  std::shared_lock lock(elections_mutex_);
  auto it = elections_.find(id);
  if (it == elections_.end()) throw NotFound("unknown election " + id);
  return it->second;
}

std::shared_ptr<ElectionService::Session> ElectionService::find_session(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session " + id);
  return it->second;
}

namespace {

nlohmann::json session_state(const std::string& id, const StoredElection& stored, const GreedyStepper& stepper,
                             bool interactive) {
  const Election& e = stored.election;
  nlohmann::json j;
  j["session_id"] = id;
  j["election_id"] = stored.id;
  j["interactive"] = interactive;
  j["tie_policy"] = to_string(stepper.policy().kind);
  j["done"] = stepper.done();
  j["remaining"] = stepper.remaining_tally();
  nlohmann::json pending = nullptr;
  if (auto tie = stepper.pending_tie()) {
    pending = nlohmann::json::array();
    for (PartyId p : *tie) pending.push_back(e.party_name(p));
  }
  j["pending_tie"] = std::move(pending);
  j["trace"] = assignment_to_json(e, stepper.assignment());
  return j;
}

}  // namespace

void ElectionService::mount(httplib::Server& server) {
  server.Post("/elections", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = add(parse_ballot_text(req.body));
    reply(res, 201, election_summary(*stored));
  }));

  server.Get(R"(/elections/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, election_summary(*find(req.matches[1])));
  }));

  server.Get(R"(/elections/([^/]+)/tally)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    const Election& e = stored->election;
    PartySet removed;
    std::vector<std::string> removed_names;
    if (req.has_param("removed")) {
      std::stringstream ss(req.get_param_value("removed"));
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        removed.insert(e.party(name));
        removed_names.push_back(name);
      }
    }
    reply(res, 200, {{"parties", e.parties()}, {"removed", removed_names}, {"tally", tally_remaining(e, removed)}});
  }));

  // Order prefix: listed parties go first in that order, then the greedy
  // rule continues. A full permutation is the plain by-order rule.
  server.Post(R"(/elections/([^/]+)/assign)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    const Election& e = stored->election;
    const nlohmann::json body = body_json(req);
    const std::vector<PartyId> order = party_list(e, body.value("order", nlohmann::json::array()));
    Assignment a;
    if (order.size() == e.party_count()) {
      a = assign_by_order(e, order);
    } else {
      complete_order(order, e.party_count());  // rejects duplicates
      GreedyStepper stepper(e, policy_from(e, body));
      for (PartyId p : order) {
        if (stepper.done()) break;
        stepper.step_force(p);
      }
      a = stepper.finish();
    }
    reply(res, 200, assignment_to_json(e, a));
  }));

  server.Post(R"(/elections/([^/]+)/greedy)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    const Election& e = stored->election;
    const nlohmann::json body = body_json(req);
    const TiePolicy policy = policy_from(e, body);
    Assignment a;
    if (body.contains("cap")) {
      a = assign_with_cap(e, CapConfig{body.at("cap").get<double>(), body.value("seed", std::uint64_t{0})}, policy);
    } else {
      a = assign_greedy(e, policy);
    }
    reply(res, 200, assignment_to_json(e, a));
  }));

  server.Post(R"(/elections/([^/]+)/sessions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    const nlohmann::json body = body_json(req);
    const bool interactive = body.value("tie", std::string("interactive")) == "interactive";
    nlohmann::json policy_body = body;
    if (interactive) policy_body["tie"] = "authority";
    auto session = std::make_shared<Session>(stored, policy_from(stored->election, policy_body), interactive);
    std::string id;
    {
      std::lock_guard lock(sessions_mutex_);
      id = "s" + std::to_string(next_session_++);
      sessions_.emplace(id, session);
    }
    std::lock_guard lock(session->mutex);
    reply(res, 201, session_state(id, *stored, session->stepper, interactive));
  }));

  server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto session = find_session(id);
    std::lock_guard lock(session->mutex);
    reply(res, 200, session_state(id, *session->election, session->stepper, session->interactive));
  }));

  server.Delete(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    std::lock_guard lock(sessions_mutex_);
    if (sessions_.erase(id) == 0) throw NotFound("unknown session " + id);
    reply(res, 200, {{"deleted", id}});
  }));

  // Body: {} to advance with the session policy, or {"choice": X} where X
  // is a tied party's name, "split", "skip" or "authority".
  server.Post(R"(/sessions/([^/]+)/step)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto session = find_session(id);
    const nlohmann::json body = body_json(req);
    std::lock_guard lock(session->mutex);
    GreedyStepper& stepper = session->stepper;
    const Election& e = session->election->election;
    if (stepper.done()) throw InputError("session is complete");
    const auto tie = stepper.pending_tie();
    if (!body.contains("choice")) {
      if (tie && session->interactive) {
        nlohmann::json state = session_state(id, *session->election, stepper, true);
        state["error"] = "tie pending; post a choice";
        reply(res, 409, state);
        return;
      }
      stepper.step();
    } else {
      const std::string choice = body.at("choice").get<std::string>();
      if (!tie) throw InputError("no tie pending; post an empty body to advance");
      if (choice == "split") {
        stepper.step_split();
      } else if (choice == "skip") {
        stepper.step_skip();
      } else if (choice == "authority") {
        stepper.step();
      } else {
        const PartyId p = e.party(choice);
        if (std::find(tie->begin(), tie->end(), p) == tie->end()) {
          throw InputError("choice " + choice + " is not among the tied parties");
        }
        stepper.step_select(p);
      }
    }
    const Round& round = stepper.assignment().rounds.back();
    std::vector<std::string> selected;
    for (PartyId p : round.selected) selected.push_back(e.party_name(p));
    nlohmann::json state = session_state(id, *session->election, stepper, session->interactive);
    state["round"] = {{"remaining", round.remaining}, {"selected", selected}, {"absorbed", round.absorbed}};
    reply(res, 200, state);
  }));

  server.Get(R"(/elections/([^/]+)/feasible)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    if (!req.has_param("target")) throw InputError("missing target parameter");
    const std::vector<std::int64_t> target = parse_int_list(req.get_param_value("target"));
    reply(res, 200, feasibility_to_json(stored->election, is_representative(stored->election, target)));
  }));

  server.Get(R"(/elections/([^/]+)/vertices)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    const Election& e = stored->election;
    if (e.party_count() > limits_.max_vertex_parties) {
      throw TooLarge("vertex enumeration limited to " + std::to_string(limits_.max_vertex_parties) + " parties");
    }
    reply(res, 200, vertices_to_json(e, enumerate_vertices(e)));
  }));

  server.Get(R"(/elections/([^/]+)/compare)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto stored = find(req.matches[1]);
    std::int64_t seats = 100;
    if (req.has_param("seats")) {
      auto parsed = parse_int_list(req.get_param_value("seats"));
      if (parsed.size() != 1) throw InputError("seats must be one integer");
      seats = parsed[0];
    }
    const Comparison c = compare_systems(stored->election, stored->single_votes, stored->rankings, seats);
    reply(res, 200, comparison_to_json(stored->election, c));
  }));

  server.Post("/simulate", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const nlohmann::json body = body_json(req);
    ExperimentConfig config;
    config.n_parties = body.value("parties", config.n_parties);
    config.n_voters = body.value("voters", config.n_voters);
    config.n_runs = body.value("runs", config.n_runs);
    config.k = body.value("k", config.k);
    config.master_seed = body.value("seed", config.master_seed);
    config.seat_house = body.value("seat_house", config.seat_house);
    config.validate();
    const long double work = static_cast<long double>(config.n_runs) * config.n_voters * config.n_parties;
    if (work > static_cast<long double>(limits_.max_simulation_work)) throw TooLarge("simulation too large");
    reply(res, 200, rank_size_to_json(run_experiment(config)));
  }));
}

void serve(ElectionService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  if (!server.listen(host, port)) throw InputError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace repvote

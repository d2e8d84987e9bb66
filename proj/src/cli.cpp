#include "repvote/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "repvote/apportion.hpp"
#include "repvote/assign.hpp"
#include "repvote/ballot_file.hpp"
#include "repvote/error.hpp"
#include "repvote/service.hpp"
#include "repvote/sim.hpp"
#include "repvote/space.hpp"
#include "repvote/trace.hpp"

namespace repvote {

namespace {

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<PartyId> parse_order(const Election& e, const std::string& text) {
  std::vector<PartyId> order;
  for (const std::string& name : split_names(text)) order.push_back(e.party(name));
  return order;
}

std::vector<std::int64_t> parse_target(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const std::string& item : split_names(text)) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || used == 0) throw InputError("malformed target: " + text);
  }
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

struct TabulateArgs {
  std::string input;
  std::string method = "greedy";
  std::string tie = "authority";
  std::string authority_order;
  std::string order;
  double cap = 0.55;
  std::uint64_t seed = 0;
  std::int64_t seats = 0;
  std::string senate;
  std::string format = "text";
  std::string output;
};

TiePolicy tie_policy(const Election& e, const TabulateArgs& a) {
  TiePolicy policy;
  policy.kind = parse_tie_kind(a.tie);
  policy.authority_order = parse_order(e, a.authority_order);
  policy.validate(e.party_count());
  return policy;
}

std::optional<SeatVector> seats_for(const Assignment& a, std::int64_t house) {
  if (house <= 0) return std::nullopt;
  return seats_largest_remainder(a.assigned, house);
}

int tabulate(const TabulateArgs& a, std::ostream& out) {
  const TraceFormat format = parse_trace_format(a.format);
  const BallotFile file = read_ballot_file(a.input);
  const Election election = to_election(file);

  RunReport report;
  report.method = a.method;
  report.config = {{"input", a.input}, {"method", a.method}, {"tie", a.tie}};
  if (!a.authority_order.empty()) report.config["authority_order"] = split_names(a.authority_order);
  if (a.seats > 0) report.config["seats"] = a.seats;

  std::optional<Election> senate;
  if (a.method == "greedy") {
    Assignment r = assign_greedy(election, tie_policy(election, a));
    report.houses.push_back({"main", &election, r, seats_for(r, a.seats)});
  } else if (a.method == "order") {
    if (a.order.empty()) throw InputError("--method order requires --order");
    report.config["order"] = split_names(a.order);
    const std::vector<PartyId> order = parse_order(election, a.order);
    Assignment r = assign_by_order(election, order);
    report.houses.push_back({"main", &election, r, seats_for(r, a.seats)});
  } else if (a.method == "cap") {
    report.config["cap"] = a.cap;
    report.config["seed"] = a.seed;
    Assignment r = assign_with_cap(election, CapConfig{a.cap, a.seed}, tie_policy(election, a));
    report.houses.push_back({"main", &election, r, seats_for(r, a.seats)});
  } else if (a.method == "twohouse") {
    if (a.senate.empty()) throw InputError("--method twohouse requires --senate");
    report.config["senate"] = a.senate;
    senate = to_election(read_ballot_file(a.senate));
    TwoHouseResult r = assign_two_house(election, *senate, tie_policy(election, a));
    std::vector<std::string> order;
    for (PartyId p : r.order) order.push_back(election.party_name(p));
    report.config["joint_order"] = order;
    report.houses.push_back({"commons", &election, r.commons, seats_for(r.commons, a.seats)});
    report.houses.push_back({"senate", &*senate, r.senate, seats_for(r.senate, a.seats)});
  } else {
    throw InputError("unknown method: " + a.method);
  }
  for (const HouseReport& h : report.houses) {
    for (std::string& d : assignment_diagnostics(*h.election, h.assignment)) {
      report.diagnostics.push_back(report.houses.size() > 1 ? h.label + ": " + d : d);
    }
  }
  emit(render_report(report, format), a.output, out);
  return static_cast<int>(ExitCode::kOk);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Representative parliaments from approval ballots", "repvote"};
  app.require_subcommand(1);

  TabulateArgs tab;
  auto* tabulate_cmd = app.add_subcommand("tabulate", "Assign ballots to parties and print the round table");
  tabulate_cmd->add_option("input", tab.input, "Ballot file (CSV or JSON)")->required();
  tabulate_cmd->add_option("--method", tab.method, "greedy | order | cap | twohouse")
      ->check(CLI::IsMember({"greedy", "order", "cap", "twohouse"}));
  tabulate_cmd->add_option("--tie", tab.tie, "split | authority | skip")
      ->check(CLI::IsMember({"split", "authority", "skip"}));
  tabulate_cmd->add_option("--authority-order", tab.authority_order, "Comma-separated party priority for ties");
  tabulate_cmd->add_option("--order", tab.order, "Comma-separated party order for --method order");
  tabulate_cmd->add_option("--cap", tab.cap, "Maximum share of voters one party may absorb");
  tabulate_cmd->add_option("--seed", tab.seed, "Seed for capped sampling");
  tabulate_cmd->add_option("--seats", tab.seats, "Also apportion this many seats by largest remainder");
  tabulate_cmd->add_option("--senate", tab.senate, "Second-house ballot file for --method twohouse");
  tabulate_cmd->add_option("--format", tab.format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  tabulate_cmd->add_option("-o,--output", tab.output, "Write to this file instead of stdout");

  std::string cmp_input, cmp_format = "text", cmp_output;
  std::int64_t cmp_seats = 100;
  auto* compare_cmd = app.add_subcommand("compare", "Proportional, Italicum and greedy side by side");
  compare_cmd->add_option("input", cmp_input, "Ballot file with single votes (and rankings for a runoff)")
      ->required();
  compare_cmd->add_option("--seats", cmp_seats, "House size");
  compare_cmd->add_option("--format", cmp_format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  compare_cmd->add_option("-o,--output", cmp_output, "Write to this file instead of stdout");

  std::string space_input, space_check, space_output;
  bool space_enumerate = false, space_audit = false;
  VertexOptions vopts;
  std::uint64_t space_seed = 0;
  auto* space_cmd = app.add_subcommand("space", "Explore the set of representative parliaments");
  space_cmd->add_option("input", space_input, "Ballot file")->required();
  space_cmd->add_flag("--enumerate", space_enumerate, "List the vertices reached by party orderings");
  space_cmd->add_option("--check", space_check, "Comma-separated target counts to test for representativity");
  space_cmd->add_flag("--audit", space_audit, "Compare hull integer points with brute force");
  space_cmd->add_option("--max-exhaustive", vopts.max_parties_exhaustive,
                        "Enumerate every ordering up to this many parties");
  space_cmd->add_option("--samples", vopts.samples, "Random orderings beyond --max-exhaustive");
  space_cmd->add_option("--seed", space_seed, "Seed for sampled orderings and audit segments");
  space_cmd->add_option("-o,--output", space_output, "Write to this file instead of stdout");

  ExperimentConfig sim;
  std::string sim_format = "text", sim_output;
  auto* sim_cmd = app.add_subcommand("simulate", "Rank-size experiment on random spatial elections");
  sim_cmd->add_option("--parties", sim.n_parties, "Parties per run");
  sim_cmd->add_option("--voters", sim.n_voters, "Voters per run");
  sim_cmd->add_option("--k", sim.k, "Distance decay exponent");
  sim_cmd->add_option("--runs", sim.n_runs, "Number of runs");
  sim_cmd->add_option("--seed", sim.master_seed, "Master seed");
  sim_cmd->add_option("--seat-house", sim.seat_house, "Rank seat shares in a house of this size");
  sim_cmd->add_option("--format", sim_format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  sim_cmd->add_option("-o,--output", sim_output, "Write to this file instead of stdout");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> preload;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--load", preload, "Ballot files to upload at start (ids e1, e2, ...)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kInputError);
  }

  try {
    if (*tabulate_cmd) return tabulate(tab, out);

    if (*compare_cmd) {
      const TraceFormat format = parse_trace_format(cmp_format);
      const BallotFile file = read_ballot_file(cmp_input);
      const Election election = to_election(file);
      const auto singles = single_votes(file, election);
      const auto ranks = rankings(file, election);
      const Comparison c = compare_systems(election, singles, ranks, cmp_seats);
      emit(render_comparison(election, c, format), cmp_output, out);
      return 0;
    }

    if (*space_cmd) {
      const Election election = to_election(read_ballot_file(space_input));
      vopts.seed = space_seed;
      nlohmann::json result = nlohmann::json::object();
      int code = 0;
      if (space_enumerate || (space_check.empty() && !space_audit)) {
        result["vertices"] = vertices_to_json(election, enumerate_vertices(election, vopts));
      }
      if (!space_check.empty()) {
        const FeasibilityResult f = is_representative(election, parse_target(space_check));
        result["check"] = feasibility_to_json(election, f);
        if (!f.feasible) code = static_cast<int>(ExitCode::kInfeasible);
      }
      if (space_audit) {
        const ConvexityReport r = convexity_audit(election, space_seed);
        result["audit"] = {{"passed", r.passed()},
                           {"achievable_count", r.achievable_count},
                           {"vertex_count", r.vertex_count},
                           {"hull_point_count", r.hull_point_count},
                           {"exhaustive_vertices", r.exhaustive_vertices},
                           {"hull_only", r.hull_only},
                           {"achievable_only", r.achievable_only},
                           {"unsound_vertices", r.unsound_vertices},
                           {"segment_points_checked", r.segment_points_checked},
                           {"segment_failures", r.segment_failures}};
      }
      emit(result.dump(2) + "\n", space_output, out);
      return code;
    }

    if (*sim_cmd) {
      const TraceFormat format = parse_trace_format(sim_format);
      sim.validate();
      emit(render_rank_size(run_experiment(sim), format), sim_output, out);
      return 0;
    }

    if (*serve_cmd) {
      ElectionService service;
      for (const std::string& path : preload) {
        auto stored = service.add(read_ballot_file(path));
        err << "loaded " << path << " as " << stored->id << '\n';
      }
      err << "listening on " << host << ':' << port << '\n';
      serve(service, host, port);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kInputError);
  }
  return 0;
}

}  // namespace repvote

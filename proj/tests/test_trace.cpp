#include <gtest/gtest.h>

#include "repvote/assign.hpp"
#include "repvote/ballot_file.hpp"
#include "repvote/trace.hpp"
#include "support.hpp"

namespace repvote {
namespace {

using testing::make_election;

Election toy() { return make_election({"a", "b", "c"}, {{{"a", "b"}, 1}, {{"b", "c"}, 1}}); }

TEST(Trace, ToyTextTable) {
  const Election e = toy();
  const std::string text = emit_trace(e, assign_greedy(e), TraceFormat::kText);
  EXPECT_EQ(text,
            "round     a   b  c\n"
            "1         1  2*  1\n"
            "assigned  0   2  0\n");
}

TEST(Trace, ToyCsv) {
  const Election e = toy();
  EXPECT_EQ(emit_trace(e, assign_greedy(e), TraceFormat::kCsv),
            "round,a,b,c,selected,absorbed\n"
            "1,1,2,1,b,2\n"
            "assigned,0,2,0,,2\n");
}

TEST(Trace, SingletonsGiveOneRowEqualToTallies) {
  const Election e = make_election({"a", "b"}, {{{"a"}, 3}, {{"b"}, 4}});
  const std::string csv = emit_trace(e, assign_greedy(e), TraceFormat::kCsv);
  EXPECT_NE(csv.find("1,3,4,"), std::string::npos) << csv;
}

TEST(Trace, SplitTieMarksBothColumns) {
  const Election e = make_election({"a", "b", "c"}, {{{"a"}, 2}, {{"b"}, 2}, {{"a", "b"}, 2}, {{"c"}, 1}});
  const std::string text = emit_trace(e, assign_greedy(e, TiePolicy::split()), TraceFormat::kText);
  EXPECT_NE(text.find("4="), std::string::npos) << text;
  EXPECT_EQ(text.find("4*"), std::string::npos) << text;
}

// Replaying the rounds from the trace reproduces the final counts.
TEST(Trace, RoundsReproduceAssignedCounts) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Election e = testing::random_election(rng, 2 + rng() % 6, 1 + rng() % 100);
    const Assignment a = assign_greedy(e, TiePolicy::skip());
    const nlohmann::json j = assignment_to_json(e, a);
    Tally replay(e.party_count(), 0);
    std::int64_t absorbed = 0;
    for (const auto& r : j.at("rounds")) {
      absorbed += r.at("absorbed").get<std::int64_t>();
      if (r.at("selected").size() == 1) {
        const PartyId p = e.party(r.at("selected")[0].get<std::string>());
        replay[p.index()] += r.at("absorbed").get<std::int64_t>();
      }
    }
    EXPECT_EQ(absorbed, e.total_voters());
    if (a.ties.empty() || a.ties[0].policy != TiePolicy::Kind::kSplit) EXPECT_EQ(replay, a.assigned);
    EXPECT_EQ(j.at("assigned").get<Tally>(), a.assigned);
  }
}

TEST(Report, JsonCarriesConfigSeatsAndDiagnostics) {
  std::vector<RawBallot> raw{{{"a"}, 3, {}}, {{"b"}, 3, {}}, {{}, 1, {}}};
  const Election e = validate_election({"a", "b"}, raw);
  RunReport report;
  report.method = "greedy";
  report.config = {{"tie", "authority"}};
  const Assignment a = assign_greedy(e);
  report.houses.push_back({"main", &e, a, seats_largest_remainder(a.assigned, 10)});
  report.diagnostics = assignment_diagnostics(e, a);
  const nlohmann::json j = nlohmann::json::parse(render_report(report, TraceFormat::kJson));
  EXPECT_EQ(j.at("houses")[0].at("seats").at("seats"), (std::vector<int>{5, 5}));
  EXPECT_FALSE(j.at("diagnostics").empty());
  EXPECT_EQ(j.at("config").at("tie"), "authority");
}

TEST(Compare, ThreeSystemsSideBySide) {
  const BallotFile f = read_ballot_file(REPVOTE_FIXTURE_DIR "/toy.csv");
  const Election e = to_election(f);
  const auto singles = single_votes(f, e);
  const auto ranks = rankings(f, e);
  const Comparison c = compare_systems(e, singles, ranks, 10);
  EXPECT_EQ(c.proportional.seats, (std::vector<std::int64_t>{5, 0, 5}));
  EXPECT_EQ(c.greedy.assigned, (Tally{0, 2, 0}));
  EXPECT_EQ(c.greedy_seats.seats, (std::vector<std::int64_t>{0, 10, 0}));
  const std::string text = render_comparison(e, c, TraceFormat::kText);
  EXPECT_NE(text.find("proportional"), std::string::npos);
  EXPECT_NE(text.find("italicum"), std::string::npos);
  EXPECT_NE(text.find("greedy"), std::string::npos);
}

}  // namespace
}  // namespace repvote

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "repvote/apportion.hpp"
#include "repvote/assign.hpp"
#include "repvote/sim.hpp"
#include "repvote/space.hpp"

namespace repvote {

enum class TraceFormat { kText, kCsv, kJson };

TraceFormat parse_trace_format(std::string_view name);

// Round table: one row of remaining tallies per round, the selected party
// marked with '*' ('=' for both sides of a split tie), parties already
// served left blank, and a final row with the assigned counts.
std::string emit_trace(const Election& election, const Assignment& assignment, TraceFormat format);

nlohmann::json assignment_to_json(const Election& election, const Assignment& assignment);

// Human-readable notes on ties and caps.
std::vector<std::string> assignment_diagnostics(const Election& election, const Assignment& assignment);

struct HouseReport {
  std::string label;
  const Election* election = nullptr;
  Assignment assignment;
  std::optional<SeatVector> seats;
};

struct RunReport {
  std::string method;
  nlohmann::json config;
  std::vector<HouseReport> houses;
  std::vector<std::string> diagnostics;
};

std::string render_report(const RunReport& report, TraceFormat format);

// Proportional, Italicum and greedy side by side on one ballot file.
struct Comparison {
  std::int64_t house_size = 0;
  SeatVector proportional;
  ItalicumResult italicum;
  Assignment greedy;
  SeatVector greedy_seats;
};

Comparison compare_systems(const Election& election, std::span<const SingleVoteBallot> single_votes,
                           std::span<const RankedBallot> rankings, std::int64_t house_size,
                           const ItalicumConfig& config = {});
nlohmann::json comparison_to_json(const Election& election, const Comparison& comparison);
std::string render_comparison(const Election& election, const Comparison& comparison, TraceFormat format);

nlohmann::json rank_size_to_json(const RankSizeReport& report);
// rank,mean,sd rows for plotting, preceded by '#' comment lines with the fit.
std::string rank_size_csv(const RankSizeReport& report);
std::string render_rank_size(const RankSizeReport& report, TraceFormat format);

nlohmann::json vertices_to_json(const Election& election, const AchievableSet& set);
nlohmann::json feasibility_to_json(const Election& election, const FeasibilityResult& result);

}  // namespace repvote

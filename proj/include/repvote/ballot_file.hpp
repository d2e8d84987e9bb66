#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "repvote/core.hpp"

namespace repvote {

// One voter's record. All forms are optional except the approvals column,
// which may be empty (an invalid ballot).
struct BallotRecord {
  std::string voter_id;
  std::vector<std::string> approvals;
  std::optional<std::string> single_vote;
  std::vector<std::string> ranking;                // most preferred first
  std::map<std::string, std::string> ratings;      // party -> rating label
  std::map<std::string, std::string> candidates;   // party -> candidate name
  std::size_t line = 0;                            // 1-based source line or record index
};

// Identical approval ballots given as one group (JSON only).
struct GroupedRecord {
  std::vector<std::string> approvals;
  std::int64_t count = 0;
  std::map<std::string, CandidateCounts> candidates;
};

struct BallotFile {
  std::vector<std::string> parties;
  std::vector<BallotRecord> records;
  std::vector<GroupedRecord> grouped;
};

// CSV layout:
//   #parties=a;b;c
//   voter_id,approvals,single_vote,ranking,ratings,candidates   (optional header)
//   v17,a;b,,b>a>c,a=good;b=sufficient,a=Ann
// Trailing columns may be omitted. Other lines starting with '#' are comments.
BallotFile parse_ballot_csv(std::istream& in);
BallotFile parse_ballot_json(const nlohmann::json& doc);
// Picks JSON when the first non-blank character is '{', CSV otherwise.
BallotFile parse_ballot_text(std::string_view text);
BallotFile read_ballot_file(const std::filesystem::path& path);

Election to_election(const BallotFile& file);
// Records carrying a single-vote choice, in file order.
std::vector<SingleVoteBallot> single_votes(const BallotFile& file, const Election& election);
// Records carrying a ranking, in file order. Truncated rankings are kept.
std::vector<RankedBallot> rankings(const BallotFile& file, const Election& election);

// One line per voter (ids v1..vN in ballot type order).
std::string write_ballot_csv(const Election& election);
// Grouped ballot types.
nlohmann::json election_to_json(const Election& election);

}  // namespace repvote

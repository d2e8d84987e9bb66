#include "repvote/ballot_file.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "repvote/error.hpp"

namespace repvote {

namespace {

constexpr std::string_view kReservedChars = ",;>=\"#\n\r";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    std::string token = trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (!token.empty()) out.push_back(std::move(token));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Comma-separated fields with double-quote escaping.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> cols;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (ch == ',' && !quoted) {
      cols.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quote");
  cols.push_back(std::move(cur));
  return cols;
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

std::map<std::string, std::string> parse_pairs(std::string_view field, std::size_t line,
                                               const char* what) {
  std::map<std::string, std::string> out;
  for (const std::string& item : split(field, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) malformed(line, std::string("expected party=value in ") + what);
    std::string key = trim(std::string_view(item).substr(0, eq));
    std::string value = trim(std::string_view(item).substr(eq + 1));
    if (key.empty() || value.empty()) malformed(line, std::string("empty key or value in ") + what);
    if (!out.emplace(std::move(key), std::move(value)).second) {
      malformed(line, std::string("duplicate party in ") + what);
    }
  }
  return out;
}

void check_record(const BallotRecord& r, const std::set<std::string, std::less<>>& parties) {
  auto known = [&](const std::string& name, const char* where) {
    if (!parties.contains(name)) malformed(r.line, "unknown party '" + name + "' in " + where);
  };
  std::set<std::string_view> seen;
  for (const auto& p : r.approvals) {
    known(p, "approvals");
    if (!seen.insert(p).second) malformed(r.line, "party listed twice in approvals");
  }
  if (r.single_vote) known(*r.single_vote, "single vote");
  seen.clear();
  for (const auto& p : r.ranking) {
    known(p, "ranking");
    if (!seen.insert(p).second) malformed(r.line, "party ranked twice");
  }
  for (const auto& [p, _] : r.ratings) known(p, "ratings");
  for (const auto& [p, _] : r.candidates) {
    known(p, "candidates");
    if (std::find(r.approvals.begin(), r.approvals.end(), p) == r.approvals.end()) {
      malformed(r.line, "candidate named for unapproved party '" + p + "'");
    }
  }
}

void check_parties(const std::vector<std::string>& parties) {
  if (parties.empty()) throw InputError("ballot file declares no parties");
  std::set<std::string_view> seen;
  for (const auto& p : parties) {
    if (p.empty() || p.find_first_of(kReservedChars) != std::string::npos) {
      throw InputError("invalid party name '" + p + "'");
    }
    if (!seen.insert(p).second) throw InputError("duplicate party name: " + p);
  }
}

void check_file(const BallotFile& file) {
  check_parties(file.parties);
  const std::set<std::string, std::less<>> names(file.parties.begin(), file.parties.end());
  for (const auto& r : file.records) check_record(r, names);
  std::size_t index = 0;
  for (const auto& g : file.grouped) {
    ++index;
    for (const auto& p : g.approvals) {
      if (!names.contains(p)) {
        throw InputError("ballot type " + std::to_string(index) + ": unknown party '" + p + "'");
      }
    }
    if (g.count < 0) throw InputError("ballot type " + std::to_string(index) + ": negative count");
  }
}

std::vector<std::string> json_strings(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw InputError(std::string(what) + " must contain strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

BallotFile parse_ballot_csv(std::istream& in) {
  BallotFile file;
  bool have_parties = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      constexpr std::string_view kDirective = "#parties=";
      if (text.starts_with(kDirective)) {
        if (have_parties) malformed(line_no, "party list declared twice");
        file.parties = split(std::string_view(text).substr(kDirective.size()), ';');
        have_parties = true;
      }
      continue;
    }
    std::vector<std::string> cols = split_csv_line(text, line_no);
    if (trim(cols[0]) == "voter_id") continue;
    if (!have_parties) malformed(line_no, "record before the #parties= line");
    if (cols.size() < 2 || cols.size() > 6) {
      malformed(line_no, "expected 2 to 6 fields, got " + std::to_string(cols.size()));
    }
    cols.resize(6);
    BallotRecord r;
    r.line = line_no;
    r.voter_id = trim(cols[0]);
    r.approvals = split(cols[1], ';');
    if (std::string s = trim(cols[2]); !s.empty()) r.single_vote = std::move(s);
    r.ranking = split(cols[3], '>');
    r.ratings = parse_pairs(cols[4], line_no, "ratings");
    r.candidates = parse_pairs(cols[5], line_no, "candidates");
    file.records.push_back(std::move(r));
  }
  if (!have_parties) throw InputError("missing #parties= line");
  check_file(file);
  return file;
}

BallotFile parse_ballot_json(const nlohmann::json& doc) {
  BallotFile file;
  try {
    if (!doc.is_object() || !doc.contains("parties")) throw InputError("JSON ballot file needs \"parties\"");
    file.parties = json_strings(doc.at("parties"), "parties");
    if (doc.contains("ballots")) {
      std::size_t index = 0;
      for (const auto& b : doc.at("ballots")) {
        BallotRecord r;
        r.line = ++index;
        r.voter_id = b.value("id", std::string("v") + std::to_string(index));
        r.approvals = json_strings(b.value("approvals", nlohmann::json::array()), "approvals");
        if (b.contains("single_vote") && !b.at("single_vote").is_null()) {
          r.single_vote = b.at("single_vote").get<std::string>();
        }
        r.ranking = json_strings(b.value("ranking", nlohmann::json::array()), "ranking");
        if (b.contains("ratings")) {
          r.ratings = b.at("ratings").get<std::map<std::string, std::string>>();
        }
        if (b.contains("candidates")) {
          r.candidates = b.at("candidates").get<std::map<std::string, std::string>>();
        }
        file.records.push_back(std::move(r));
      }
    }
    if (doc.contains("ballot_types")) {
      for (const auto& t : doc.at("ballot_types")) {
        GroupedRecord g;
        g.approvals = json_strings(t.at("approvals"), "approvals");
        g.count = t.at("count").get<std::int64_t>();
        if (t.contains("candidates")) {
          g.candidates = t.at("candidates").get<std::map<std::string, CandidateCounts>>();
        }
        file.grouped.push_back(std::move(g));
      }
    }
    if (doc.contains("invalid_ballots")) {
      file.grouped.push_back({{}, doc.at("invalid_ballots").get<std::int64_t>(), {}});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON ballot file: ") + e.what());
  }
  check_file(file);
  return file;
}

BallotFile parse_ballot_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw InputError("malformed JSON ballot file");
    return parse_ballot_json(doc);
  }
  std::istringstream in{std::string(text)};
  return parse_ballot_csv(in);
}

BallotFile read_ballot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ballot_text(buf.str());
}

Election to_election(const BallotFile& file) {
  std::vector<RawBallot> raw;
  raw.reserve(file.records.size() + file.grouped.size());
  for (const auto& r : file.records) {
    RawBallot b{r.approvals, 1, {}};
    for (const auto& [party, name] : r.candidates) b.candidates[party][name] = 1;
    raw.push_back(std::move(b));
  }
  for (const auto& g : file.grouped) raw.push_back({g.approvals, g.count, g.candidates});
  return validate_election(file.parties, raw);
}

std::vector<SingleVoteBallot> single_votes(const BallotFile& file, const Election& election) {
  std::vector<SingleVoteBallot> out;
  for (const auto& r : file.records) {
    if (r.single_vote) out.push_back({election.party(*r.single_vote)});
  }
  return out;
}

std::vector<RankedBallot> rankings(const BallotFile& file, const Election& election) {
  std::vector<RankedBallot> out;
  for (const auto& r : file.records) {
    if (r.ranking.empty()) continue;
    RankedBallot b;
    for (const auto& name : r.ranking) b.ranking.push_back(election.party(name));
    out.push_back(std::move(b));
  }
  return out;
}

std::string write_ballot_csv(const Election& election) {
  check_parties(election.parties());
  std::ostringstream out;
  out << "#parties=";
  for (std::size_t i = 0; i < election.party_count(); ++i) {
    out << (i ? ";" : "") << election.parties()[i];
  }
  out << "\nvoter_id,approvals,single_vote,ranking,ratings,candidates\n";
  std::int64_t voter = 0;
  for (const BallotType& t : election.ballot_types()) {
    std::string approvals;
    t.approvals.for_each([&](PartyId p) {
      if (!approvals.empty()) approvals += ';';
      approvals += election.party_name(p);
    });
    // The i-th voter of the type names the i-th candidate in expansion order.
    std::map<PartyId, std::vector<std::string>> named;
    for (const auto& [party, counts] : t.preferences) {
      for (const auto& [name, n] : counts) {
        if (name.find_first_of(kReservedChars) != std::string::npos) {
          throw InputError("candidate name not representable in CSV: " + name);
        }
        named[party].insert(named[party].end(), static_cast<std::size_t>(n), name);
      }
    }
    for (std::int64_t i = 0; i < t.count; ++i) {
      out << 'v' << ++voter << ',' << approvals << ",,,,";
      bool first = true;
      for (const auto& [party, names] : named) {
        if (static_cast<std::size_t>(i) >= names.size()) continue;
        out << (first ? "" : ";") << election.party_name(party) << '=' << names[i];
        first = false;
      }
      out << '\n';
    }
  }
  for (std::int64_t i = 0; i < election.invalid_ballots(); ++i) out << 'v' << ++voter << ",,,,,\n";
  return out.str();
}

nlohmann::json election_to_json(const Election& election) {
  nlohmann::json doc;
  doc["parties"] = election.parties();
  nlohmann::json types = nlohmann::json::array();
  for (const BallotType& t : election.ballot_types()) {
    nlohmann::json jt;
    nlohmann::json approvals = nlohmann::json::array();
    t.approvals.for_each([&](PartyId p) { approvals.push_back(election.party_name(p)); });
    jt["approvals"] = std::move(approvals);
    jt["count"] = t.count;
    if (!t.preferences.empty()) {
      nlohmann::json c = nlohmann::json::object();
      for (const auto& [party, counts] : t.preferences) c[election.party_name(party)] = counts;
      jt["candidates"] = std::move(c);
    }
    types.push_back(std::move(jt));
  }
  doc["ballot_types"] = std::move(types);
  if (election.invalid_ballots() > 0) doc["invalid_ballots"] = election.invalid_ballots();
  return doc;
}

}  // namespace repvote

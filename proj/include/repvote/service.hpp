#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "repvote/assign.hpp"
#include "repvote/ballot_file.hpp"

namespace httplib {
class Server;
}

namespace repvote {

// An uploaded election with its auxiliary ballot views. Never mutated
// after upload.
struct StoredElection {
  std::string id;
  BallotFile file;
  Election election;
  std::vector<SingleVoteBallot> single_votes;
  std::vector<RankedBallot> rankings;
};

struct ServiceLimits {
  std::size_t max_vertex_parties = 8;
  std::uint64_t max_simulation_work = 50'000'000;  // runs * voters * parties
};

// In-memory election store and stepped greedy sessions behind an HTTP/JSON
// API. Requests may arrive concurrently; each session serializes its own
// steps.
class ElectionService {
 public:
  explicit ElectionService(ServiceLimits limits = {});

  std::shared_ptr<const StoredElection> add(BallotFile file);
  std::shared_ptr<const StoredElection> find(const std::string& id) const;

  // Registers every endpoint on `server`.
  void mount(httplib::Server& server);

 private:
  struct Session {
    std::mutex mutex;
    std::shared_ptr<const StoredElection> election;
    GreedyStepper stepper;
    bool interactive = false;

    Session(std::shared_ptr<const StoredElection> e, TiePolicy policy, bool interactive_ties)
        : election(std::move(e)), stepper(election->election, std::move(policy)),
          interactive(interactive_ties) {}
  };

  std::shared_ptr<Session> find_session(const std::string& id) const;

  ServiceLimits limits_;
  mutable std::shared_mutex elections_mutex_;
  std::map<std::string, std::shared_ptr<const StoredElection>> elections_;
  std::uint64_t next_election_ = 1;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
};

// Blocks serving on host:port until the process stops.
void serve(ElectionService& service, const std::string& host, int port);

}  // namespace repvote

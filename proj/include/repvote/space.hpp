#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "repvote/assign.hpp"
#include "repvote/core.hpp"

namespace repvote {

// Deduplicated parliaments reached by assigning ballots in fixed party
// orders. With every ordering evaluated these are the extreme points of the
// achievable set.
struct AchievableSet {
  std::vector<Tally> vertices;  // sorted, unique
  bool exhaustive = true;
  std::size_t orderings_evaluated = 0;
  std::uint64_t sample_seed = 0;
};

struct VertexOptions {
  std::size_t max_parties_exhaustive = 8;
  // Used when the party count exceeds max_parties_exhaustive: this many
  // seeded random orderings plus list order and the greedy order.
  std::size_t samples = 5000;
  std::uint64_t seed = 0;
};

// OpenMP kernel; results are sorted before returning so the output does not
// depend on scheduling.
AchievableSet enumerate_vertices(const Election& election, const VertexOptions& options = {});
// Serial reference of enumerate_vertices, kept for testing and benchmarks.
AchievableSet enumerate_vertices_serial(const Election& election, const VertexOptions& options = {});

// The k-th permutation of 0..n-1 in lexicographic order.
std::vector<PartyId> unrank_permutation(std::uint64_t k, std::size_t n);

struct FeasibilityResult {
  bool feasible = false;
  // certificate[t][p]: ballots of type t given to party p (when feasible).
  std::vector<std::vector<std::int64_t>> certificate;
  // A party subset whose captive ballots exceed its target (when infeasible
  // and the subset route was used).
  std::optional<PartySet> violated_subset;
};

inline constexpr std::size_t kMaxHallParties = 20;

// Whether ballots can be assigned so party i receives exactly target[i].
// Decided by the subset (Hall) condition for up to kMaxHallParties parties
// and by max-flow beyond that; the certificate always comes from max-flow.
// Throws InputError if the target has the wrong length, a negative entry or
// a sum different from v.
FeasibilityResult is_representative(const Election& election, std::span<const std::int64_t> target);

// Subset route: every party subset T must be able to hold the ballots whose
// approvals lie inside T. Returns the first violating subset, if any.
std::optional<PartySet> hall_violation(const Election& election, std::span<const std::int64_t> target);

// Flow route: a per-type split meeting the target exactly, if one exists.
std::optional<std::vector<std::vector<std::int64_t>>> flow_assignment(
    const Election& election, std::span<const std::int64_t> target);

inline constexpr std::uint64_t kMaxBruteForceProduct = 10'000'000;

// Number of per-type splits (product over types of the compositions of the
// type's count among its approvals), saturating at UINT64_MAX.
std::uint64_t split_product_size(const Election& election);

// Every parliament reachable by some legal assignment, by exhaustive
// enumeration. Throws TooLarge when split_product_size exceeds `limit`.
std::vector<Tally> brute_force_achievable(const Election& election,
                                          std::uint64_t limit = kMaxBruteForceProduct);

// The per-voter Cartesian product of approval sets, voters taken in ballot
// type order. Each element lists the party chosen for each voter.
std::vector<std::vector<PartyId>> voter_choice_product(const Election& election,
                                                       std::uint64_t limit = kMaxBruteForceProduct);

// Exact (rational) test of whether x lies in the convex hull of `points`.
bool in_convex_hull(std::span<const Tally> points, std::span<const std::int64_t> x);

// Integer points with sum v inside the convex hull of `vertices`.
std::vector<Tally> hull_integer_points(std::span<const Tally> vertices, std::int64_t total);

struct ConvexityReport {
  std::size_t vertex_count = 0;
  std::size_t achievable_count = 0;
  std::size_t hull_point_count = 0;
  bool exhaustive_vertices = true;
  std::vector<Tally> hull_only;        // in the hull but not achievable
  std::vector<Tally> achievable_only;  // achievable but outside the hull
  std::vector<Tally> unsound_vertices; // vertices failing is_representative
  std::size_t segment_points_checked = 0;
  std::vector<Tally> segment_failures;

  bool passed() const {
    return exhaustive_vertices && hull_only.empty() && achievable_only.empty() &&
           unsound_vertices.empty() && segment_failures.empty();
  }
};

// Compares the integer points of the vertex hull with the brute-force
// achievable set, then checks integer points on segments between random
// achievable pairs. Small instances only.
ConvexityReport convexity_audit(const Election& election, std::uint64_t seed = 0,
                                std::size_t segment_pairs = 50);

// Convex combination of the vertices produced by `orderings`.
std::vector<double> sample_interior(const Election& election,
                                    std::span<const std::vector<PartyId>> orderings,
                                    std::span<const double> weights);

}  // namespace repvote

#include "repvote/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <omp.h>

#include "repvote/error.hpp"
#include "repvote/seeding.hpp"

namespace repvote {

namespace {

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

void sort_unique(std::vector<Tally>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<PartyId> random_order(std::size_t n, std::uint64_t seed) {
  std::vector<PartyId> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) order.emplace_back(i);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  return order;
}

// Orderings evaluated in sampling mode: list order, greedy order, then
// seeded random permutations.
std::vector<std::vector<PartyId>> sampled_orderings(const Election& e, const VertexOptions& o) {
  const std::size_t n = e.party_count();
  std::vector<std::vector<PartyId>> out;
  out.reserve(o.samples + 2);
  out.push_back(complete_order({}, n));
  out.push_back(complete_order(assign_greedy(e).order, n));
  for (std::size_t j = 0; j < o.samples; ++j) out.push_back(random_order(n, derive_seed(o.seed, j)));
  return out;
}

void check_target(const Election& e, std::span<const std::int64_t> target) {
  if (target.size() != e.party_count()) throw InputError("target must have one entry per party");
  std::int64_t sum = 0;
  for (std::int64_t x : target) {
    if (x < 0) throw InputError("target entries must be non-negative");
    sum += x;
  }
  if (sum != e.total_voters()) {
    throw InputError("target sums to " + std::to_string(sum) + " but there are " +
                     std::to_string(e.total_voters()) + " ballots");
  }
}

// Dinic max-flow on a small dense-ish graph.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : graph_(nodes) {}

  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
    graph_[from].push_back(edges_.size());
    edges_.push_back({to, cap});
    graph_[to].push_back(edges_.size());
    edges_.push_back({from, 0});
    return edges_.size() - 2;
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      next_.assign(graph_.size(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

  // Flow pushed through the edge returned by add_edge.
  std::int64_t flow(std::size_t edge) const { return edges_[edge ^ 1].cap; }

 private:
  struct Edge {
    std::size_t to;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(graph_.size(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t id : graph_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t pushed) {
    if (u == t) return pushed;
    for (std::size_t& i = next_[u]; i < graph_[u].size(); ++i) {
      const std::size_t id = graph_[u][i];
      Edge& e = edges_[id];
      if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
      if (std::int64_t got = dfs(e.to, t, std::min(pushed, e.cap))) {
        e.cap -= got;
        edges_[id ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<std::size_t>> graph_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace

std::vector<PartyId> unrank_permutation(std::uint64_t k, std::size_t n) {
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0U);
  std::vector<PartyId> out;
  out.reserve(n);
  for (std::size_t i = n; i > 0; --i) {
    const std::uint64_t f = factorial(i - 1);
    const std::size_t idx = static_cast<std::size_t>(k / f);
    k %= f;
    out.emplace_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

AchievableSet enumerate_vertices_serial(const Election& election, const VertexOptions& options) {
  AchievableSet out;
  const std::size_t n = election.party_count();
  if (n <= options.max_parties_exhaustive) {
    std::vector<PartyId> order = complete_order({}, n);
    do {
      out.vertices.push_back(assigned_by_order(election, order));
      ++out.orderings_evaluated;
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    out.exhaustive = false;
    out.sample_seed = options.seed;
    for (const auto& order : sampled_orderings(election, options)) {
      out.vertices.push_back(assigned_by_order(election, order));
      ++out.orderings_evaluated;
    }
  }
  sort_unique(out.vertices);
  return out;
}

AchievableSet enumerate_vertices(const Election& election, const VertexOptions& options) {
  AchievableSet out;
  const std::size_t n = election.party_count();
  if (n <= options.max_parties_exhaustive) {
    const std::uint64_t count = factorial(n);
    out.vertices.resize(count);
    // Contiguous blocks of ranks per thread; each block unranks its first
    // permutation and walks forward with next_permutation.
#pragma omp parallel
    {
      const std::uint64_t threads = static_cast<std::uint64_t>(omp_get_num_threads());
      const std::uint64_t tid = static_cast<std::uint64_t>(omp_get_thread_num());
      const std::uint64_t begin = count * tid / threads;
      const std::uint64_t end = count * (tid + 1) / threads;
      if (begin < end) {
        std::vector<PartyId> order = unrank_permutation(begin, n);
        for (std::uint64_t k = begin; k < end; ++k) {
          out.vertices[k] = assigned_by_order(election, order);
          std::next_permutation(order.begin(), order.end());
        }
      }
    }
    out.orderings_evaluated = count;
  } else {
    out.exhaustive = false;
    out.sample_seed = options.seed;
    const auto orderings = sampled_orderings(election, options);
    out.vertices.resize(orderings.size());
    const std::int64_t m = static_cast<std::int64_t>(orderings.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < m; ++j) {
      out.vertices[static_cast<std::size_t>(j)] =
          assigned_by_order(election, orderings[static_cast<std::size_t>(j)]);
    }
    out.orderings_evaluated = orderings.size();
  }
  sort_unique(out.vertices);
  return out;
}

std::optional<PartySet> hall_violation(const Election& election, std::span<const std::int64_t> target) {
  check_target(election, target);
  const std::size_t n = election.party_count();
  if (n > kMaxHallParties) {
    throw TooLarge("subset condition limited to " + std::to_string(kMaxHallParties) + " parties");
  }
  const std::size_t subsets = std::size_t{1} << n;
  // captive[T] = ballots whose approvals lie inside T (sum over subsets).
  std::vector<std::int64_t> captive(subsets, 0);
  for (const BallotType& t : election.ballot_types()) captive[t.approvals.bits()] += t.count;
  for (std::size_t bit = 0; bit < n; ++bit) {
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & (std::size_t{1} << bit)) captive[mask] += captive[mask ^ (std::size_t{1} << bit)];
    }
  }
  std::vector<std::int64_t> capacity(subsets, 0);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    capacity[mask] = capacity[mask & (mask - 1)] + target[low];
    if (captive[mask] > capacity[mask]) return PartySet(mask);
  }
  return std::nullopt;
}

std::optional<std::vector<std::vector<std::int64_t>>> flow_assignment(
    const Election& election, std::span<const std::int64_t> target) {
  check_target(election, target);
  const auto& types = election.ballot_types();
  const std::size_t m = types.size();
  const std::size_t n = election.party_count();
  const std::size_t source = m + n;
  const std::size_t sink = m + n + 1;
  MaxFlow flow(m + n + 2);
  std::vector<std::vector<std::pair<PartyId, std::size_t>>> links(m);
  for (std::size_t t = 0; t < m; ++t) {
    flow.add_edge(source, t, types[t].count);
    types[t].approvals.for_each([&](PartyId p) {
      links[t].emplace_back(p, flow.add_edge(t, m + p.index(), types[t].count));
    });
  }
  for (std::size_t p = 0; p < n; ++p) flow.add_edge(m + p, sink, target[p]);
  if (flow.run(source, sink) != election.total_voters()) return std::nullopt;

  std::vector<std::vector<std::int64_t>> split(m, std::vector<std::int64_t>(n, 0));
  for (std::size_t t = 0; t < m; ++t) {
    for (const auto& [p, edge] : links[t]) split[t][p.index()] = flow.flow(edge);
  }
  return split;
}

FeasibilityResult is_representative(const Election& election, std::span<const std::int64_t> target) {
  check_target(election, target);
  FeasibilityResult out;
  if (election.party_count() <= kMaxHallParties) {
    out.violated_subset = hall_violation(election, target);
    out.feasible = !out.violated_subset.has_value();
    if (out.feasible) {
      auto split = flow_assignment(election, target);
      if (!split) throw std::logic_error("subset condition and max-flow disagree");
      out.certificate = std::move(*split);
    }
  } else if (auto split = flow_assignment(election, target)) {
    out.feasible = true;
    out.certificate = std::move(*split);
  }
  return out;
}

std::uint64_t split_product_size(const Election& election) {
  constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t product = 1;
  for (const BallotType& t : election.ballot_types()) {
    // C(count + k - 1, k - 1) compositions of count into k parts.
    const std::uint64_t k = t.approvals.size();
    long double c = 1.0L;
    for (std::uint64_t i = 1; i < k; ++i) {
      c = c * static_cast<long double>(static_cast<std::uint64_t>(t.count) + i) /
          static_cast<long double>(i);
    }
    const long double next = static_cast<long double>(product) * std::round(c);
    if (next >= static_cast<long double>(kSaturated)) return kSaturated;
    product = static_cast<std::uint64_t>(next);
  }
  return product;
}

namespace {

// Calls f(parts) for every composition of `total` into parts.size() parts.
template <typename F>
void for_each_composition(std::int64_t total, std::vector<std::int64_t>& parts, std::size_t i, F& f) {
  if (i + 1 == parts.size()) {
    parts[i] = total;
    f(parts);
    return;
  }
  for (std::int64_t x = 0; x <= total; ++x) {
    parts[i] = x;
    for_each_composition(total - x, parts, i + 1, f);
  }
}

}  // namespace

std::vector<Tally> brute_force_achievable(const Election& election, std::uint64_t limit) {
  if (split_product_size(election) > limit) {
    throw TooLarge("instance too large for exhaustive enumeration");
  }
  const std::size_t n = election.party_count();
  std::set<Tally> reached{Tally(n, 0)};
  for (const BallotType& t : election.ballot_types()) {
    const std::vector<PartyId> members = t.approvals.members();
    std::set<Tally> next;
    for (const Tally& base : reached) {
      std::vector<std::int64_t> parts(members.size());
      auto add = [&](const std::vector<std::int64_t>& split) {
        Tally x = base;
        for (std::size_t j = 0; j < members.size(); ++j) x[members[j].index()] += split[j];
        next.insert(std::move(x));
      };
      for_each_composition(t.count, parts, 0, add);
    }
    reached = std::move(next);
  }
  return {reached.begin(), reached.end()};
}

std::vector<std::vector<PartyId>> voter_choice_product(const Election& election, std::uint64_t limit) {
  std::vector<std::vector<PartyId>> voters;
  long double size = 1.0L;
  for (const BallotType& t : election.ballot_types()) {
    for (std::int64_t i = 0; i < t.count; ++i) {
      voters.push_back(t.approvals.members());
      size *= static_cast<long double>(t.approvals.size());
      if (size > static_cast<long double>(limit)) {
        throw TooLarge("Cartesian product of approval sets too large");
      }
    }
  }
  std::vector<std::vector<PartyId>> out{{}};
  for (const auto& choices : voters) {
    std::vector<std::vector<PartyId>> next;
    next.reserve(out.size() * choices.size());
    for (const auto& prefix : out) {
      for (PartyId p : choices) {
        next.push_back(prefix);
        next.back().push_back(p);
      }
    }
    out = std::move(next);
  }
  return out;
}

ConvexityReport convexity_audit(const Election& election, std::uint64_t seed, std::size_t segment_pairs) {
  if (election.party_count() > VertexOptions{}.max_parties_exhaustive) {
    throw TooLarge("convexity audit needs every ordering; limited to " +
                   std::to_string(VertexOptions{}.max_parties_exhaustive) + " parties");
  }
  ConvexityReport report;
  const AchievableSet vertices = enumerate_vertices(election);
  const std::vector<Tally> achievable = brute_force_achievable(election);
  const std::vector<Tally> hull = hull_integer_points(vertices.vertices, election.total_voters());
  report.vertex_count = vertices.vertices.size();
  report.achievable_count = achievable.size();
  report.hull_point_count = hull.size();
  report.exhaustive_vertices = vertices.exhaustive;

  std::set_difference(hull.begin(), hull.end(), achievable.begin(), achievable.end(),
                      std::back_inserter(report.hull_only));
  std::set_difference(achievable.begin(), achievable.end(), hull.begin(), hull.end(),
                      std::back_inserter(report.achievable_only));
  for (const Tally& v : vertices.vertices) {
    if (!is_representative(election, v).feasible) report.unsound_vertices.push_back(v);
  }

  if (achievable.size() >= 2) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < segment_pairs; ++i) {
      const Tally& a = achievable[uniform_below(rng, achievable.size())];
      const Tally& b = achievable[uniform_below(rng, achievable.size())];
      std::int64_t steps = 0;
      for (std::size_t j = 0; j < a.size(); ++j) steps = std::gcd(steps, std::abs(b[j] - a[j]));
      if (steps == 0) continue;
      for (std::int64_t s = 0; s <= steps; ++s) {
        Tally x(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) x[j] = a[j] + (b[j] - a[j]) / steps * s;
        ++report.segment_points_checked;
        const bool listed = std::binary_search(achievable.begin(), achievable.end(), x);
        if (!listed || !is_representative(election, x).feasible) report.segment_failures.push_back(x);
      }
    }
  }
  return report;
}

std::vector<double> sample_interior(const Election& election,
                                    std::span<const std::vector<PartyId>> orderings,
                                    std::span<const double> weights) {
  if (orderings.empty() || orderings.size() != weights.size()) {
    throw InputError("need one weight per ordering");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError("weights must sum to 1");
  std::vector<double> point(election.party_count(), 0.0);
  for (std::size_t j = 0; j < orderings.size(); ++j) {
    require_permutation(orderings[j], election.party_count());
    const Tally v = assigned_by_order(election, orderings[j]);
    for (std::size_t i = 0; i < point.size(); ++i) point[i] += weights[j] * static_cast<double>(v[i]);
  }
  return point;
}

}  // namespace repvote

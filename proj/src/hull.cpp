#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

#include "repvote/error.hpp"
#include "repvote/space.hpp"

namespace repvote {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Phase-one simplex with Bland's rule over exact rationals: is there
// lambda >= 0 with A lambda = b, given b >= 0?
bool feasible_nonnegative(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  const std::size_t width = cols + rows;

  std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(width, 0));
  std::vector<std::size_t> basis(rows);
  std::vector<Rational> cost(width, 0);
  Rational objective = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      tab[r][c] = a[r][c];
      cost[c] -= a[r][c];
    }
    tab[r][cols + r] = 1;
    basis[r] = cols + r;
    objective -= b[r];
  }

  for (;;) {
    std::size_t enter = width;
    for (std::size_t c = 0; c < width; ++c) {
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = rows;
    Rational best;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][enter] <= 0) continue;
      Rational ratio = b[r] / tab[r][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded cannot happen in phase one

    const Rational pivot = tab[leave][enter];
    for (auto& x : tab[leave]) x /= pivot;
    b[leave] /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || tab[r][enter] == 0) continue;
      const Rational f = tab[r][enter];
      for (std::size_t c = 0; c < width; ++c) tab[r][c] -= f * tab[leave][c];
      b[r] -= f * b[leave];
    }
    if (cost[enter] != 0) {
      const Rational f = cost[enter];
      for (std::size_t c = 0; c < width; ++c) cost[c] -= f * tab[leave][c];
      objective -= f * b[leave];
    }
    basis[leave] = enter;
  }
  return objective == 0;
}

void box_points(std::size_t i, std::int64_t left, const Tally& lo, const Tally& hi, Tally& cur,
                std::vector<Tally>& out) {
  if (i + 1 == cur.size()) {
    if (left >= lo[i] && left <= hi[i]) {
      cur[i] = left;
      out.push_back(cur);
    }
    return;
  }
  for (std::int64_t x = lo[i]; x <= std::min(hi[i], left); ++x) {
    cur[i] = x;
    box_points(i + 1, left - x, lo, hi, cur, out);
  }
}

}  // namespace

bool in_convex_hull(std::span<const Tally> points, std::span<const std::int64_t> x) {
  if (points.empty()) return false;
  const std::size_t dim = x.size();
  for (const Tally& p : points) {
    if (p.size() != dim) throw InputError("dimension mismatch in hull test");
  }
  // Rows: one per coordinate plus sum(lambda) = 1. Coordinates are
  // non-negative so b >= 0 holds.
  std::vector<std::vector<Rational>> a(dim + 1, std::vector<Rational>(points.size()));
  std::vector<Rational> b(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) {
    if (x[i] < 0) return false;
    for (std::size_t j = 0; j < points.size(); ++j) a[i][j] = points[j][i];
    b[i] = x[i];
  }
  for (std::size_t j = 0; j < points.size(); ++j) a[dim][j] = 1;
  b[dim] = 1;
  return feasible_nonnegative(std::move(a), std::move(b));
}

std::vector<Tally> hull_integer_points(std::span<const Tally> vertices, std::int64_t total) {
  if (vertices.empty()) return {};
  const std::size_t dim = vertices.front().size();
  if (dim == 0) return {};
  Tally lo = vertices.front();
  Tally hi = vertices.front();
  for (const Tally& v : vertices) {
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  long double box = 1;
  for (std::size_t i = 0; i + 1 < dim; ++i) box *= static_cast<long double>(hi[i] - lo[i] + 1);
  if (box > static_cast<long double>(kMaxBruteForceProduct)) {
    throw TooLarge("hull bounding box too large to scan");
  }
  std::vector<Tally> candidates;
  Tally cur(dim, 0);
  box_points(0, total, lo, hi, cur, candidates);
  std::vector<Tally> out;
  for (const Tally& c : candidates) {
    if (in_convex_hull(vertices, c)) out.push_back(c);
  }
  return out;  // lexicographic by construction
}

}  // namespace repvote

#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <random>
#include <vector>

namespace percolor::test {

using Pt = std::array<double, 3>;

inline double sq(const Pt& a, const Pt& b) {
  double s = 0;
  for (int d = 0; d < 3; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return s;
}

// Plain Lloyd from random distinct starting points, many restarts; the best
// objective stands in for the global optimum.
inline double brute_force_objective(const std::vector<Pt>& pts, std::size_t k, int restarts) {
  std::mt19937_64 engine(12345);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), engine);
    std::vector<Pt> c;
    for (std::size_t j = 0; j < k; ++j) c.push_back(pts[idx[j]]);
    std::vector<std::size_t> lab(pts.size(), 0);
    double obj = 0;
    for (int it = 0; it < 200; ++it) {
      obj = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t bj = 0;
        for (std::size_t j = 1; j < k; ++j) if (sq(pts[i], c[j]) < sq(pts[i], c[bj])) bj = j;
        lab[i] = bj;
        obj += sq(pts[i], c[bj]);
      }
      std::vector<Pt> next(k, Pt{0, 0, 0});
      std::vector<double> cnt(k, 0);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (int d = 0; d < 3; ++d) next[lab[i]][d] += pts[i][d];
        cnt[lab[i]] += 1;
      }
      bool moved = false;
      for (std::size_t j = 0; j < k; ++j) {
        if (cnt[j] == 0) continue;
        for (int d = 0; d < 3; ++d) next[j][d] /= cnt[j];
        if (next[j] != c[j]) moved = true;
        c[j] = next[j];
      }
      if (!moved) break;
    }
    best = std::min(best, obj);
  }
  return best;
}

}  // namespace percolor::test

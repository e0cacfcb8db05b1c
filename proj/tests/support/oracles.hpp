#pragma once

// Brute-force reference implementations. Deliberately naive and written
// without calling into the library's own arithmetic.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "argrec/efm.hpp"

namespace argrec::testing {

// Term-by-term objective with explicit loops.
inline double naive_objective(const efm::Factors& f, const efm::Hyperparams& h,
                              const efm::Observations& obs) {
  auto dot = [](const Eigen::MatrixXd& a, std::size_t i, const Eigen::MatrixXd& b, std::size_t j) {
    double s = 0;
    for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
    return s;
  };
  auto sq = [](const Eigen::MatrixXd& m) {
    double s = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    return s;
  };
  double j = 0;
  for (const auto& e : obs.ratings) {
    double d = e.value - dot(f.U1, e.row, f.U2, e.col) - dot(f.H1, e.row, f.H2, e.col);
    j += d * d;
  }
  for (const auto& e : obs.attention) {
    double d = e.value - dot(f.U1, e.row, f.V, e.col);
    j += h.lambda_x * d * d;
  }
  for (const auto& e : obs.quality) {
    double d = e.value - dot(f.U2, e.row, f.V, e.col);
    j += h.lambda_y * d * d;
  }
  j += h.lambda_u * (sq(f.U1) + sq(f.U2)) + h.lambda_h * (sq(f.H1) + sq(f.H2)) + h.lambda_v * sq(f.V);
  return j;
}

// Attention and quality on the 1..5 scale, straight from the definitions.
inline double naive_attention(std::uint32_t t) {
  return 1.0 + 4.0 * (2.0 / (1.0 + std::exp(-static_cast<double>(t))) - 1.0);
}
inline double naive_quality(std::uint32_t pos, std::uint32_t neg) {
  return 1.0 + 4.0 / (1.0 + std::exp(-(static_cast<double>(pos) - static_cast<double>(neg))));
}

// The k in 0..100 closest to 100*pos/total, ties to the larger k; integers only.
inline int naive_pct(std::uint32_t pos, std::uint32_t total) {
  int best = 0;
  long long best_dist = -1;
  for (int k = 0; k <= 100; ++k) {
    long long dist = std::llabs(100LL * pos - static_cast<long long>(k) * total);
    if (best_dist < 0 || dist <= best_dist) {
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

// U for sample a: pairs where a wins, half for ties.
inline double naive_u(std::span<const double> a, std::span<const double> b) {
  double u = 0;
  for (double x : a)
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  return u;
}

// 1-based rank of each feature code in a user's attention row: ahead are
// all features with more attention, and equal attention with a lower code.
inline std::array<int, kFeatureCount> naive_ranks(const std::array<double, kFeatureCount>& att) {
  std::array<int, kFeatureCount> rank{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    int ahead = 0;
    for (std::size_t g = 0; g < kFeatureCount; ++g)
      if (att[g] > att[f] || (att[g] == att[f] && g < f)) ++ahead;
    rank[f] = ahead + 1;
  }
  return rank;
}

}  // namespace argrec::testing

#pragma once

// Hand-built models with chosen predictions.

#include <array>
#include <memory>
#include <vector>

#include "argrec/efm.hpp"
#include "support/synthetic.hpp"

namespace argrec::testing {

// U1 V' reproduces `attention` exactly (V = I); every rating predicts 3.
inline std::shared_ptr<efm::Model> model_with_attention(
    const std::vector<std::array<double, kFeatureCount>>& attention, std::size_t items) {
  const auto m = attention.size();
  auto f = efm::Factors::zeros(m, items, kFeatureCount, 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < kFeatureCount; ++k) f.U1(i, k) = attention[i][k];
  f.V = Eigen::MatrixXd::Identity(kFeatureCount, kFeatureCount);
  f.H1.setConstant(1.0);
  f.H2.setConstant(3.0);
  efm::Hyperparams h;
  h.rank = kFeatureCount;
  h.hidden_rank = 1;
  return std::make_shared<efm::Model>(f, h, std::vector<double>{1.0},
                                      efm::IndexTable(numbered("u", m)),
                                      efm::IndexTable(numbered("i", items)));
}

// U1 U2' reproduces `ratings` (U2 = I); attention is zero.
inline std::shared_ptr<efm::Model> model_with_ratings(const std::vector<std::vector<double>>& ratings) {
  const auto m = ratings.size();
  const auto n = ratings.front().size();
  auto f = efm::Factors::zeros(m, n, n, 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) f.U1(i, j) = ratings[i][j];
  f.U2 = Eigen::MatrixXd::Identity(n, n);
  efm::Hyperparams h;
  h.rank = n;
  h.hidden_rank = 1;
  return std::make_shared<efm::Model>(f, h, std::vector<double>{1.0},
                                      efm::IndexTable(numbered("u", m)),
                                      efm::IndexTable(numbered("i", n)));
}

}  // namespace argrec::testing

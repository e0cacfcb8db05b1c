#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "argrec/corpus.hpp"
#include "argrec/types.hpp"

// Explicit Factor Model: ratings A ~ U1 U2' + H1 H2', user attention
// X ~ U1 V', item quality Y ~ U2 V', all factors nonnegative.
namespace argrec::efm {

inline constexpr double kScaleMax = 5.0;  // N of the 1..N rating scale

/// Bijective id <-> dense index table. Ids are kept in ascending order.
class IndexTable {
 public:
  IndexTable() = default;
  explicit IndexTable(std::vector<std::string> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::string& id(std::size_t index) const { return ids_.at(index); }
  std::optional<std::size_t> find(const std::string& id) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

struct RatingMatrix {
  IndexTable users;
  IndexTable items;
  std::vector<Entry> entries;  // (user, item, rating), sorted by (user, item)
};

struct AttentionMatrix {
  std::size_t users = 0;
  std::vector<Entry> entries;  // (user, feature code, value); unobserved cells absent
  std::vector<std::uint32_t> mentions;  // users x 10, row-major: t_ij

  std::optional<double> at(std::size_t user, Feature f) const;
};

struct SentimentCounts {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  std::uint32_t neutral = 0;

  bool operator==(const SentimentCounts&) const = default;
};

struct QualityMatrix {
  std::size_t items = 0;
  std::vector<Entry> entries;  // (item, feature code, value); observed iff pos + neg > 0
  std::vector<SentimentCounts> counts;  // items x 10, row-major

  std::optional<double> at(std::size_t item, Feature f) const;
  const SentimentCounts& count(std::size_t item, Feature f) const {
    return counts.at(item * kFeatureCount + feature_code(f));
  }
};

/// X_ij = 1 + (N-1) (2 / (1 + exp(-t)) - 1) for t > 0 mentions.
double attention_value(std::uint32_t mentions);
/// Y_ij = 1 + (N-1) / (1 + exp(-(pos - neg))) for pos + neg > 0.
double quality_value(std::uint32_t pos, std::uint32_t neg);

/// Ratings keyed by the sorted user and item ids of the reviews. Repeated
/// (user, item) reviews are averaged.
RatingMatrix build_rating_matrix(const std::vector<corpus::Review>& reviews);
AttentionMatrix build_attention_matrix(const std::vector<corpus::SentenceRecord>& records,
                                       const IndexTable& users);
QualityMatrix build_quality_matrix(const std::vector<corpus::SentenceRecord>& records,
                                   const IndexTable& items);

struct Hyperparams {
  std::size_t rank = 5;
  std::size_t hidden_rank = 5;
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double lambda_u = 0.01;
  double lambda_h = 0.01;
  double lambda_v = 0.01;
  double learning_rate = 0.005;
  std::size_t max_epochs = 500;
  std::uint64_t seed = 42;
  double tol = 1e-6;

  /// Throws validation Error on r < 1, negative lambdas, non-positive lr/tol.
  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

struct Factors {
  Eigen::MatrixXd U1;  // users x r
  Eigen::MatrixXd U2;  // items x r
  Eigen::MatrixXd V;   // features x r
  Eigen::MatrixXd H1;  // users x r_h
  Eigen::MatrixXd H2;  // items x r_h

  static Factors zeros(std::size_t users, std::size_t items, std::size_t rank,
                       std::size_t hidden_rank);
  double min_coeff() const;
  bool operator==(const Factors& o) const;
};

/// Observations the objective is evaluated against. Index spaces must agree
/// with the factor shapes.
struct Observations {
  std::size_t users = 0;
  std::size_t items = 0;
  std::span<const Entry> ratings;
  std::span<const Entry> attention;
  std::span<const Entry> quality;

  static Observations of(const RatingMatrix& a, const AttentionMatrix& x, const QualityMatrix& y);
};

double objective(const Factors& f, const Hyperparams& h, const Observations& obs);
/// Analytic gradient of `objective` with respect to every factor.
Factors gradient(const Factors& f, const Hyperparams& h, const Observations& obs);

class Model {
 public:
  Model() = default;
  Model(Factors factors, Hyperparams h, std::vector<double> training_log, IndexTable users,
        IndexTable items);

  const Factors& factors() const noexcept { return factors_; }
  const Hyperparams& hyperparams() const noexcept { return hyperparams_; }
  const std::vector<double>& training_log() const noexcept { return training_log_; }
  const IndexTable& users() const noexcept { return users_; }
  const IndexTable& items() const noexcept { return items_; }
  std::size_t user_count() const noexcept { return users_.size(); }
  std::size_t item_count() const noexcept { return items_.size(); }
  bool trained() const noexcept { return !training_log_.empty(); }

  /// [U1 U2' + H1 H2']_ui, unclamped.
  double predict_rating(std::size_t user, std::size_t item) const;
  /// Row `user` of U1 V'.
  std::array<double, kFeatureCount> predict_attention(std::size_t user) const;

 private:
  Factors factors_;
  Hyperparams hyperparams_;
  std::vector<double> training_log_;
  IndexTable users_;
  IndexTable items_;
};

double objective(const Model& model, const RatingMatrix& a, const AttentionMatrix& x,
                 const QualityMatrix& y);

/// Seeded factor initialization, uniform on [0.01, 1.0].
Factors initial_factors(std::size_t users, std::size_t items, const Hyperparams& h);

/// Projected alternating gradient descent over U1, U2, V, H1, H2 with a
/// step-halving safeguard, so the logged objective never increases.
Model train(const RatingMatrix& a, const AttentionMatrix& x, const QualityMatrix& y,
            const Hyperparams& h);

double evaluate_rmse(const Model& model, std::span<const Entry> holdout);

/// Number of rating circles shown for a prediction: clamp to [1,5], round half up.
int display_circles(double predicted_rating);

void save_checkpoint(std::ostream& out, const Model& model);
void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(std::istream& in);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace argrec::efm

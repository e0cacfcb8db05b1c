#include "argrec/efm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "argrec/error.hpp"

namespace argrec::efm {

namespace {

constexpr int kMaxHalvings = 20;

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void fill_uniform(Eigen::MatrixXd& m, std::mt19937_64& gen) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = 0.01 + 0.99 * uniform01(gen);
  }
}

std::optional<double> lookup(const std::vector<Entry>& entries, std::size_t row, std::size_t col) {
  auto it = std::lower_bound(entries.begin(), entries.end(), Entry{row, col, 0.0},
                             [](const Entry& a, const Entry& b) {
                               return std::tie(a.row, a.col) < std::tie(b.row, b.col);
                             });
  if (it == entries.end() || it->row != row || it->col != col) return std::nullopt;
  return it->value;
}

void check_entries(std::span<const Entry> entries, std::size_t rows, std::size_t cols,
                   const char* what) {
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw Error(ErrorCode::dimension_mismatch,
                  std::string(what) + " entry (" + std::to_string(e.row) + "," +
                      std::to_string(e.col) + ") outside " + std::to_string(rows) + "x" +
                      std::to_string(cols));
    }
  }
}

void check_shapes(const Factors& f, const Hyperparams& h, const Observations& obs) {
  auto m = static_cast<Eigen::Index>(obs.users);
  auto n = static_cast<Eigen::Index>(obs.items);
  auto r = static_cast<Eigen::Index>(h.rank);
  auto rh = static_cast<Eigen::Index>(h.hidden_rank);
  auto p = static_cast<Eigen::Index>(kFeatureCount);
  bool ok = f.U1.rows() == m && f.U1.cols() == r && f.U2.rows() == n && f.U2.cols() == r &&
            f.V.rows() == p && f.V.cols() == r && f.H1.rows() == m && f.H1.cols() == rh &&
            f.H2.rows() == n && f.H2.cols() == rh;
  if (!ok) throw Error(ErrorCode::dimension_mismatch, "factor shapes disagree with data/hyperparams");
  check_entries(obs.ratings, obs.users, obs.items, "rating");
  check_entries(obs.attention, obs.users, kFeatureCount, "attention");
  check_entries(obs.quality, obs.items, kFeatureCount, "quality");
}

double rating_residual(const Factors& f, const Entry& e) {
  auto i = static_cast<Eigen::Index>(e.row);
  auto j = static_cast<Eigen::Index>(e.col);
  double pred = f.U1.row(i).dot(f.U2.row(j));
  if (f.H1.cols() > 0) pred += f.H1.row(i).dot(f.H2.row(j));
  return pred - e.value;
}

// Sum of squared residuals plus ridge terms; shapes are assumed checked.
double objective_unchecked(const Factors& f, const Hyperparams& h, const Observations& obs) {
  double loss_a = 0.0;
  for (const auto& e : obs.ratings) {
    double r = rating_residual(f, e);
    loss_a += r * r;
  }
  double loss_x = 0.0;
  for (const auto& e : obs.attention) {
    double r = f.U1.row(static_cast<Eigen::Index>(e.row)).dot(f.V.row(static_cast<Eigen::Index>(e.col))) - e.value;
    loss_x += r * r;
  }
  double loss_y = 0.0;
  for (const auto& e : obs.quality) {
    double r = f.U2.row(static_cast<Eigen::Index>(e.row)).dot(f.V.row(static_cast<Eigen::Index>(e.col))) - e.value;
    loss_y += r * r;
  }
  return loss_a + h.lambda_x * loss_x + h.lambda_y * loss_y +
         h.lambda_u * (f.U1.squaredNorm() + f.U2.squaredNorm()) +
         h.lambda_h * (f.H1.squaredNorm() + f.H2.squaredNorm()) + h.lambda_v * f.V.squaredNorm();
}

Factors gradient_unchecked(const Factors& f, const Hyperparams& h, const Observations& obs) {
  Factors g;
  g.U1 = 2.0 * h.lambda_u * f.U1;
  g.U2 = 2.0 * h.lambda_u * f.U2;
  g.V = 2.0 * h.lambda_v * f.V;
  g.H1 = 2.0 * h.lambda_h * f.H1;
  g.H2 = 2.0 * h.lambda_h * f.H2;
  for (const auto& e : obs.ratings) {
    auto i = static_cast<Eigen::Index>(e.row);
    auto j = static_cast<Eigen::Index>(e.col);
    double r2 = 2.0 * rating_residual(f, e);
    g.U1.row(i) += r2 * f.U2.row(j);
    g.U2.row(j) += r2 * f.U1.row(i);
    if (f.H1.cols() > 0) {
      g.H1.row(i) += r2 * f.H2.row(j);
      g.H2.row(j) += r2 * f.H1.row(i);
    }
  }
  for (const auto& e : obs.attention) {
    auto i = static_cast<Eigen::Index>(e.row);
    auto k = static_cast<Eigen::Index>(e.col);
    double r2 = 2.0 * h.lambda_x * (f.U1.row(i).dot(f.V.row(k)) - e.value);
    g.U1.row(i) += r2 * f.V.row(k);
    g.V.row(k) += r2 * f.U1.row(i);
  }
  for (const auto& e : obs.quality) {
    auto j = static_cast<Eigen::Index>(e.row);
    auto k = static_cast<Eigen::Index>(e.col);
    double r2 = 2.0 * h.lambda_y * (f.U2.row(j).dot(f.V.row(k)) - e.value);
    g.U2.row(j) += r2 * f.V.row(k);
    g.V.row(k) += r2 * f.U2.row(j);
  }
  return g;
}

using Block = Eigen::MatrixXd Factors::*;
constexpr std::array<Block, 5> kBlocks = {&Factors::U1, &Factors::U2, &Factors::V, &Factors::H1,
                                          &Factors::H2};

// One projected gradient step on a single block, halving the step until the
// objective does not increase. Returns the (possibly unchanged) objective.
double update_block(Factors& f, Block block, double current, const Hyperparams& h,
                    const Observations& obs) {
  if ((f.*block).size() == 0) return current;
  Eigen::MatrixXd grad = gradient_unchecked(f, h, obs).*block;
  Eigen::MatrixXd original = f.*block;
  double step = h.learning_rate;
  for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
    f.*block = (original - step * grad).cwiseMax(0.0);
    double candidate = objective_unchecked(f, h, obs);
    if (candidate <= current) return candidate;
    step *= 0.5;
  }
  f.*block = std::move(original);
  return current;
}

}  // namespace

IndexTable::IndexTable(std::vector<std::string> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
}

std::optional<std::size_t> IndexTable::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> AttentionMatrix::at(std::size_t user, Feature f) const {
  return lookup(entries, user, feature_code(f));
}

std::optional<double> QualityMatrix::at(std::size_t item, Feature f) const {
  return lookup(entries, item, feature_code(f));
}

double attention_value(std::uint32_t mentions) {
  double t = static_cast<double>(mentions);
  return 1.0 + (kScaleMax - 1.0) * (2.0 / (1.0 + std::exp(-t)) - 1.0);
}

double quality_value(std::uint32_t pos, std::uint32_t neg) {
  double t = static_cast<double>(pos) + static_cast<double>(neg);
  double mean_sentiment = (static_cast<double>(pos) - static_cast<double>(neg)) / t;
  return 1.0 + (kScaleMax - 1.0) / (1.0 + std::exp(-t * mean_sentiment));
}

RatingMatrix build_rating_matrix(const std::vector<corpus::Review>& reviews) {
  std::vector<std::string> users;
  std::vector<std::string> items;
  for (const auto& r : reviews) {
    users.push_back(r.user_id);
    items.push_back(r.item_id);
  }
  RatingMatrix a{IndexTable(std::move(users)), IndexTable(std::move(items)), {}};
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, int>> sums;
  for (const auto& r : reviews) {
    auto& cell = sums[{*a.users.find(r.user_id), *a.items.find(r.item_id)}];
    cell.first += r.rating;
    cell.second += 1;
  }
  for (const auto& [key, cell] : sums) {
    a.entries.push_back(Entry{key.first, key.second, cell.first / cell.second});
  }
  return a;
}

AttentionMatrix build_attention_matrix(const std::vector<corpus::SentenceRecord>& records,
                                       const IndexTable& users) {
  AttentionMatrix x;
  x.users = users.size();
  x.mentions.assign(x.users * kFeatureCount, 0);
  for (const auto& rec : records) {
    if (!rec.feature) continue;
    auto u = users.find(rec.user_id);
    if (!u) continue;
    ++x.mentions[*u * kFeatureCount + feature_code(*rec.feature)];
  }
  for (std::size_t u = 0; u < x.users; ++u) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      auto t = x.mentions[u * kFeatureCount + k];
      if (t > 0) x.entries.push_back(Entry{u, k, attention_value(t)});
    }
  }
  return x;
}

QualityMatrix build_quality_matrix(const std::vector<corpus::SentenceRecord>& records,
                                   const IndexTable& items) {
  QualityMatrix y;
  y.items = items.size();
  y.counts.assign(y.items * kFeatureCount, SentimentCounts{});
  for (const auto& rec : records) {
    if (!rec.feature) continue;
    auto i = items.find(rec.item_id);
    if (!i) continue;
    auto& c = y.counts[*i * kFeatureCount + feature_code(*rec.feature)];
    switch (rec.polarity) {
      case Polarity::positive: ++c.pos; break;
      case Polarity::negative: ++c.neg; break;
      case Polarity::neutral: ++c.neutral; break;
    }
  }
  for (std::size_t i = 0; i < y.items; ++i) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      const auto& c = y.counts[i * kFeatureCount + k];
      if (c.pos + c.neg > 0) y.entries.push_back(Entry{i, k, quality_value(c.pos, c.neg)});
    }
  }
  return y;
}

void Hyperparams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::validation, msg); };
  if (rank < 1) fail("rank must be >= 1");
  for (double l : {lambda_x, lambda_y, lambda_u, lambda_h, lambda_v}) {
    if (!(l >= 0.0) || !std::isfinite(l)) fail("regularization weights must be finite and >= 0");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be > 0");
  if (!(tol > 0.0)) fail("tol must be > 0");
}

Factors Factors::zeros(std::size_t users, std::size_t items, std::size_t rank,
                       std::size_t hidden_rank) {
  auto m = static_cast<Eigen::Index>(users);
  auto n = static_cast<Eigen::Index>(items);
  auto r = static_cast<Eigen::Index>(rank);
  auto rh = static_cast<Eigen::Index>(hidden_rank);
  auto p = static_cast<Eigen::Index>(kFeatureCount);
  return Factors{Eigen::MatrixXd::Zero(m, r), Eigen::MatrixXd::Zero(n, r),
                 Eigen::MatrixXd::Zero(p, r), Eigen::MatrixXd::Zero(m, rh),
                 Eigen::MatrixXd::Zero(n, rh)};
}

double Factors::min_coeff() const {
  double lo = std::numeric_limits<double>::infinity();
  for (auto block : kBlocks) {
    if ((this->*block).size() > 0) lo = std::min(lo, (this->*block).minCoeff());
  }
  return lo;
}

bool Factors::operator==(const Factors& o) const {
  for (auto block : kBlocks) {
    const auto& a = this->*block;
    const auto& b = o.*block;
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

Observations Observations::of(const RatingMatrix& a, const AttentionMatrix& x,
                              const QualityMatrix& y) {
  if (x.users != a.users.size() || y.items != a.items.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "attention/quality matrices do not match the rating matrix index tables");
  }
  return Observations{a.users.size(), a.items.size(), a.entries, x.entries, y.entries};
}

double objective(const Factors& f, const Hyperparams& h, const Observations& obs) {
  check_shapes(f, h, obs);
  return objective_unchecked(f, h, obs);
}

Factors gradient(const Factors& f, const Hyperparams& h, const Observations& obs) {
  check_shapes(f, h, obs);
  return gradient_unchecked(f, h, obs);
}

Model::Model(Factors factors, Hyperparams h, std::vector<double> training_log, IndexTable users,
             IndexTable items)
    : factors_(std::move(factors)),
      hyperparams_(h),
      training_log_(std::move(training_log)),
      users_(std::move(users)),
      items_(std::move(items)) {
  Observations empty{users_.size(), items_.size(), {}, {}, {}};
  check_shapes(factors_, hyperparams_, empty);
}

double Model::predict_rating(std::size_t user, std::size_t item) const {
  if (user >= user_count() || item >= item_count()) {
    throw Error(ErrorCode::index_out_of_range,
                "prediction index (" + std::to_string(user) + "," + std::to_string(item) + ")");
  }
  return rating_residual(factors_, Entry{user, item, 0.0});
}

std::array<double, kFeatureCount> Model::predict_attention(std::size_t user) const {
  if (user >= user_count()) {
    throw Error(ErrorCode::index_out_of_range, "user index " + std::to_string(user));
  }
  std::array<double, kFeatureCount> out{};
  auto i = static_cast<Eigen::Index>(user);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    out[k] = factors_.U1.row(i).dot(factors_.V.row(static_cast<Eigen::Index>(k)));
  }
  return out;
}

double objective(const Model& model, const RatingMatrix& a, const AttentionMatrix& x,
                 const QualityMatrix& y) {
  return objective(model.factors(), model.hyperparams(), Observations::of(a, x, y));
}

Factors initial_factors(std::size_t users, std::size_t items, const Hyperparams& h) {
  std::mt19937_64 gen(h.seed);
  auto f = Factors::zeros(users, items, h.rank, h.hidden_rank);
  for (auto block : kBlocks) fill_uniform(f.*block, gen);
  return f;
}

Model train(const RatingMatrix& a, const AttentionMatrix& x, const QualityMatrix& y,
            const Hyperparams& h) {
  h.validate();
  auto obs = Observations::of(a, x, y);
  auto f = initial_factors(obs.users, obs.items, h);
  check_shapes(f, h, obs);

  std::vector<double> log;
  double current = objective_unchecked(f, h, obs);
  log.push_back(current);
  for (std::size_t epoch = 0; epoch < h.max_epochs; ++epoch) {
    double previous = current;
    for (auto block : kBlocks) current = update_block(f, block, current, h, obs);
    log.push_back(current);
    if (previous <= 0.0 || (previous - current) / previous < h.tol) break;
  }
  return Model(std::move(f), h, std::move(log), a.users, a.items);
}

double evaluate_rmse(const Model& model, std::span<const Entry> holdout) {
  if (holdout.empty()) throw Error(ErrorCode::empty_input, "empty holdout");
  double sum = 0.0;
  for (const auto& e : holdout) {
    double r = model.predict_rating(e.row, e.col) - e.value;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(holdout.size()));
}

int display_circles(double predicted_rating) {
  double clamped = std::clamp(predicted_rating, 1.0, kScaleMax);
  return static_cast<int>(std::floor(clamped + 0.5));
}

}  // namespace argrec::efm

#include "argrec/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "argrec/error.hpp"

namespace argrec::pipeline {

using nlohmann::json;

IngestSummary summarize(std::size_t reviews, const std::vector<corpus::SentenceRecord>& records) {
  IngestSummary s;
  s.reviews = reviews;
  s.records = records.size();
  for (const auto& r : records) {
    if (!r.feature) {
      ++s.unclassified;
      continue;
    }
    ++s.counts[std::string(feature_name(*r.feature))][std::string(polarity_name(r.polarity))];
  }
  return s;
}

json to_json(const IngestSummary& s) {
  return json{{"reviews", s.reviews},
              {"records", s.records},
              {"unclassified", s.unclassified},
              {"counts", s.counts}};
}

IngestSummary ingest(const std::filesystem::path& corpus_path, const aspect::Classifier& classifier,
                     const std::filesystem::path& records_out) {
  auto reviews = corpus::parse_corpus(corpus_path);
  auto records = corpus::build_sentence_records(reviews, classifier);
  std::ofstream out(records_out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + records_out.string());
  corpus::write_records(out, records);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failed for " + records_out.string());
  return summarize(reviews.size(), records);
}

Split split_holdout(const std::vector<efm::Entry>& entries, std::uint64_t seed, double fraction) {
  std::vector<efm::Entry> shuffled = entries;
  std::mt19937_64 gen(seed);
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[gen() % i]);
  }
  auto holdout = static_cast<std::size_t>(fraction * static_cast<double>(shuffled.size()));
  Split s;
  s.train.assign(shuffled.begin(), shuffled.end() - static_cast<std::ptrdiff_t>(holdout));
  s.holdout.assign(shuffled.end() - static_cast<std::ptrdiff_t>(holdout), shuffled.end());
  auto by_cell = [](const efm::Entry& a, const efm::Entry& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  };
  std::sort(s.train.begin(), s.train.end(), by_cell);
  std::sort(s.holdout.begin(), s.holdout.end(), by_cell);
  return s;
}

TrainReport train(const std::vector<corpus::Review>& reviews,
                  const std::vector<corpus::SentenceRecord>& records, const efm::Hyperparams& h) {
  auto ratings = efm::build_rating_matrix(reviews);
  auto attention = efm::build_attention_matrix(records, ratings.users);
  auto quality = efm::build_quality_matrix(records, ratings.items);
  auto split = split_holdout(ratings.entries, h.seed);

  efm::RatingMatrix train_ratings{ratings.users, ratings.items, split.train};
  TrainReport report{efm::train(train_ratings, attention, quality, h), 0.0, std::nullopt,
                     split.train.size(), split.holdout.size()};
  report.final_objective = report.model.training_log().back();
  if (!split.holdout.empty()) report.holdout_rmse = efm::evaluate_rmse(report.model, split.holdout);
  return report;
}

json to_json(const TrainReport& r, std::size_t log_tail) {
  const auto& log = r.model.training_log();
  auto first = log.size() > log_tail ? log.end() - static_cast<std::ptrdiff_t>(log_tail) : log.begin();
  return json{{"epochs", log.size() - 1},
              {"final_objective", r.final_objective},
              {"holdout_rmse", r.holdout_rmse ? json(*r.holdout_rmse) : json(nullptr)},
              {"train_ratings", r.train_ratings},
              {"holdout_ratings", r.holdout_ratings},
              {"users", r.model.user_count()},
              {"items", r.model.item_count()},
              {"training_log_tail", std::vector<double>(first, log.end())}};
}

}  // namespace argrec::pipeline

#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "argrec/aspect.hpp"
#include "argrec/corpus.hpp"
#include "argrec/efm.hpp"

// End-to-end steps behind the command line: ingest and train.
namespace argrec::pipeline {

inline constexpr double kHoldoutFraction = 0.1;

struct IngestSummary {
  std::size_t reviews = 0;
  std::size_t records = 0;
  std::map<std::string, std::map<std::string, std::size_t>> counts;  // feature -> polarity -> n
  std::size_t unclassified = 0;
};

IngestSummary summarize(std::size_t reviews, const std::vector<corpus::SentenceRecord>& records);
nlohmann::json to_json(const IngestSummary& s);

/// Parses, classifies and writes SentenceRecord JSONL.
IngestSummary ingest(const std::filesystem::path& corpus_path, const aspect::Classifier& classifier,
                     const std::filesystem::path& records_out);

struct Split {
  std::vector<efm::Entry> train;
  std::vector<efm::Entry> holdout;
};

/// Seeded shuffle of the observed ratings; the last floor(10%) form the
/// holdout. Train entries come back sorted by (user, item).
Split split_holdout(const std::vector<efm::Entry>& entries, std::uint64_t seed,
                    double fraction = kHoldoutFraction);

struct TrainReport {
  efm::Model model;
  double final_objective = 0.0;
  std::optional<double> holdout_rmse;
  std::size_t train_ratings = 0;
  std::size_t holdout_ratings = 0;
};

/// Ratings come from the reviews, attention and quality from the records.
/// The model is fit on the training split only.
TrainReport train(const std::vector<corpus::Review>& reviews,
                  const std::vector<corpus::SentenceRecord>& records, const efm::Hyperparams& h);
nlohmann::json to_json(const TrainReport& r, std::size_t log_tail = 5);

}  // namespace argrec::pipeline

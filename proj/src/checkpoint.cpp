#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "argrec/efm.hpp"
#include "argrec/error.hpp"

namespace argrec::efm {

using nlohmann::json;

namespace {

constexpr int kCheckpointVersion = 1;

json to_row_major(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

Eigen::MatrixXd from_row_major(const json& j, const char* name, std::size_t rows,
                               std::size_t cols) {
  if (!j.contains(name) || !j.at(name).is_array()) {
    throw Error(ErrorCode::checkpoint_version, std::string("checkpoint lacks matrix ") + name);
  }
  const auto& values = j.at(name);
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::dimension_mismatch, std::string("matrix ") + name + " has " +
                                                   std::to_string(values.size()) +
                                                   " values, expected " +
                                                   std::to_string(rows * cols));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto& v = values[k++];
      if (!v.is_number()) throw Error(ErrorCode::format, std::string("non-numeric value in ") + name);
      double x = v.get<double>();
      if (!std::isfinite(x) || x < 0.0) {
        throw Error(ErrorCode::validation, std::string("negative or non-finite value in ") + name);
      }
      m(i, c) = x;
    }
  }
  return m;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Model& model) {
  const auto& h = model.hyperparams();
  const auto& f = model.factors();
  json j;
  j["version"] = kCheckpointVersion;
  j["dims"] = {{"m", model.user_count()}, {"n", model.item_count()}, {"p", kFeatureCount},
               {"r", h.rank}, {"r_h", h.hidden_rank}};
  j["hyperparams"] = {{"r", h.rank},
                      {"r_h", h.hidden_rank},
                      {"lambda_x", h.lambda_x},
                      {"lambda_y", h.lambda_y},
                      {"lambda_u", h.lambda_u},
                      {"lambda_h", h.lambda_h},
                      {"lambda_v", h.lambda_v},
                      {"learning_rate", h.learning_rate},
                      {"max_epochs", h.max_epochs},
                      {"seed", h.seed},
                      {"tol", h.tol}};
  j["U1"] = to_row_major(f.U1);
  j["U2"] = to_row_major(f.U2);
  j["V"] = to_row_major(f.V);
  j["H1"] = to_row_major(f.H1);
  j["H2"] = to_row_major(f.H2);
  j["training_log"] = model.training_log();
  j["user_ids"] = model.users().ids();
  j["item_ids"] = model.items().ids();
  out << j.dump() << '\n';
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  save_checkpoint(out, model);
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

Model load_checkpoint(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::checkpoint_version, std::string("unreadable checkpoint: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kCheckpointVersion) {
    throw Error(ErrorCode::checkpoint_version, "unsupported or missing checkpoint version");
  }
  try {
    const auto& dims = j.at("dims");
    auto m = dims.at("m").get<std::size_t>();
    auto n = dims.at("n").get<std::size_t>();
    auto p = dims.at("p").get<std::size_t>();
    auto r = dims.at("r").get<std::size_t>();
    auto rh = dims.at("r_h").get<std::size_t>();
    if (p != kFeatureCount) throw Error(ErrorCode::dimension_mismatch, "p must be 10");

    const auto& hj = j.at("hyperparams");
    Hyperparams h;
    h.rank = hj.at("r").get<std::size_t>();
    h.hidden_rank = hj.at("r_h").get<std::size_t>();
    h.lambda_x = hj.at("lambda_x").get<double>();
    h.lambda_y = hj.at("lambda_y").get<double>();
    h.lambda_u = hj.at("lambda_u").get<double>();
    h.lambda_h = hj.at("lambda_h").get<double>();
    h.lambda_v = hj.at("lambda_v").get<double>();
    h.learning_rate = hj.at("learning_rate").get<double>();
    h.max_epochs = hj.at("max_epochs").get<std::size_t>();
    h.seed = hj.at("seed").get<std::uint64_t>();
    h.tol = hj.at("tol").get<double>();
    if (h.rank != r || h.hidden_rank != rh) {
      throw Error(ErrorCode::dimension_mismatch, "hyperparams disagree with dims");
    }
    h.validate();

    Factors f{from_row_major(j, "U1", m, r), from_row_major(j, "U2", n, r),
              from_row_major(j, "V", p, r), from_row_major(j, "H1", m, rh),
              from_row_major(j, "H2", n, rh)};
    auto user_ids = j.at("user_ids").get<std::vector<std::string>>();
    auto item_ids = j.at("item_ids").get<std::vector<std::string>>();
    IndexTable users(user_ids);
    IndexTable items(item_ids);
    if (users.size() != m || items.size() != n || users.ids() != user_ids ||
        items.ids() != item_ids) {
      throw Error(ErrorCode::dimension_mismatch, "id tables disagree with dims or are not sorted/unique");
    }
    auto log = j.at("training_log").get<std::vector<double>>();
    if (log.empty()) throw Error(ErrorCode::validation, "empty training_log");
    return Model(std::move(f), h, std::move(log), std::move(users), std::move(items));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::checkpoint_version, std::string("malformed checkpoint: ") + e.what());
  }
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace argrec::efm

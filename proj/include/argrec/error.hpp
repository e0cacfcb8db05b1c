#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace argrec {

/// Error categories shared by every module. The C API maps these one-to-one
/// onto argrec_status codes.
enum class ErrorCode {
  io,
  format,
  validation,
  dimension_mismatch,
  index_out_of_range,
  model_not_trained,
  checkpoint_version,
  unknown_session,
  unknown_item,
  unknown_feature,
  unknown_construct,
  move_not_allowed,
  no_such_term,
  style_mismatch,
  empty_input,
  degenerate_input,
  no_gold_labels,
  storage,
  bind,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input line; `line()` is 1-based.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& detail)
      : Error(ErrorCode::format, "line " + std::to_string(line) + ": " + detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace argrec

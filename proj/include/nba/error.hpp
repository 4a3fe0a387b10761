#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nba {

enum class ErrorCode {
  InvalidArgument,
  UnknownPopulation,
  DuplicateWord,
  UnknownWord,
  ParseError,
  InvalidConfig,
  PoolExhausted,
  TypeMismatch,
  HubBusy,
  NoSuchCell,
  CellBusy,
  NotATree,
  UnknownUpos,
  UnmappedLabel,
  QuerySyntaxError,
  UnknownRelation,
  SpanNotClosed,
  StateFormat,
};

std::string_view to_string(ErrorCode code);

// Every domain failure is reported as an Error carrying a code, so callers
// (tests, the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<int> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // 1-based input line for parse-style errors.
  std::optional<int> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<int> line_;
};

}  // namespace nba

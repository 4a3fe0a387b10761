#include "nba/error.hpp"

namespace nba {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownPopulation: return "UnknownPopulation";
    case ErrorCode::DuplicateWord: return "DuplicateWord";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::PoolExhausted: return "PoolExhausted";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::HubBusy: return "HubBusy";
    case ErrorCode::NoSuchCell: return "NoSuchCell";
    case ErrorCode::CellBusy: return "CellBusy";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::UnknownUpos: return "UnknownUpos";
    case ErrorCode::UnmappedLabel: return "UnmappedLabel";
    case ErrorCode::QuerySyntaxError: return "QuerySyntaxError";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::SpanNotClosed: return "SpanNotClosed";
    case ErrorCode::StateFormat: return "StateFormat";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::optional<int> line) {
  std::string out(to_string(code));
  if (line) out += "(line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<int> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace nba

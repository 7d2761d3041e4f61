#include "plfu/types.hpp"

#include <algorithm>
#include <cctype>

namespace plfu {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::LFU:
      return "lfu";
    case Policy::PLFU:
      return "plfu";
    case Policy::PLFUA:
      return "plfua";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  return outcome == Outcome::Hit ? "hit" : "miss";
}

Policy parse_policy(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "lfu") return Policy::LFU;
  if (lower == "plfu") return Policy::PLFU;
  if (lower == "plfua") return Policy::PLFUA;
  throw Error(ErrorKind::InvalidParameter,
              "unknown policy '" + std::string(text) + "' (expected lfu, plfu or plfua)");
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
      return "invalid-config";
    case ErrorKind::InvalidParameter:
      return "invalid-parameter";
    case ErrorKind::MalformedRecord:
      return "malformed-record";
    case ErrorKind::InsufficientObjects:
      return "insufficient-objects";
    case ErrorKind::EmptyEvents:
      return "empty-events";
    case ErrorKind::UnknownObject:
      return "unknown-object";
    case ErrorKind::ParseError:
      return "parse-error";
    case ErrorKind::Io:
      return "io-error";
  }
  return "error";
}

}  // namespace plfu

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plfu {

/// Identity of a cacheable object (channel or content id).
using ObjectId = std::uint64_t;

enum class Policy { LFU, PLFU, PLFUA };

enum class Outcome : std::uint8_t { Hit, Miss };

std::string_view to_string(Policy policy);
std::string_view to_string(Outcome outcome);

/// Parses "lfu", "plfu" or "plfua" (case-insensitive).
Policy parse_policy(std::string_view text);

struct AccessEvent {
  std::uint64_t seq = 0;
  ObjectId object = 0;
  Outcome outcome = Outcome::Miss;
  std::optional<ObjectId> evicted;

  bool operator==(const AccessEvent&) const = default;
};

enum class ErrorKind {
  InvalidConfig,
  InvalidParameter,
  MalformedRecord,
  InsufficientObjects,
  EmptyEvents,
  UnknownObject,
  ParseError,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace plfu

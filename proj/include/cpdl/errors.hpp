#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cpdl {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed formula or program text. offset is a byte position into the input.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Malformed model/certificate file contents.
struct FormatError : Error {
  using Error::Error;
};

// Caller handed in data violating a documented precondition
// (model not validating the logic, gamma not closed under subformulas, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// A filtration strategy ran to completion without producing a verified
// certificate. candidates counts attempts for enumerating strategies.
struct StrategyFailed : Error {
  std::uint64_t candidates;
  explicit StrategyFailed(const std::string& msg, std::uint64_t cand = 0)
      : Error(msg), candidates(cand) {}
};

// A configured resource cap was hit (evaluation cap, carrier cap, search
// budget). Work is aborted, never silently truncated.
struct LimitExceeded : Error {
  std::uint64_t limit;
  std::uint64_t needed;  // 0 when unknown (hit mid-run)
  LimitExceeded(const std::string& msg, std::uint64_t lim, std::uint64_t need = 0)
      : Error(msg), limit(lim), needed(need) {}
};

}  // namespace cpdl

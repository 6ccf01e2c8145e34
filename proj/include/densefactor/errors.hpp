#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace densefactor {

// Base class for all library errors. `code()` is a stable machine-readable
// name; the CLI maps codes onto exit codes.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

// Operands or arguments that violate an operation's precondition.
class UsageError : public Error {
public:
  explicit UsageError(const std::string& msg) : Error("UsageError", msg) {}
};

// Scenario text that does not parse or fails validation.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("ParseError", "line " + std::to_string(line) + ": " + msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// generate() grew past its bound and no lazy fallback exists for the
// group kind; signals a non-locally-finite configuration.
class ClosureExceedsBound : public Error {
public:
  explicit ClosureExceedsBound(std::uint64_t bound)
      : Error("ClosureExceedsBound",
              "subgroup closure exceeded bound " + std::to_string(bound)),
        bound_(bound) {}

  std::uint64_t bound() const noexcept { return bound_; }

private:
  std::uint64_t bound_;
};

// A candidate stream was scanned to its probe budget (or to its end)
// without an acceptable element.
class SearchExhausted : public Error {
public:
  SearchExhausted(std::string op, std::uint64_t probes)
      : Error("SearchExhausted",
              op + ": no acceptable candidate within " +
                  std::to_string(probes) + " probes"),
        op_(std::move(op)), probes_(probes) {}

  const std::string& op() const noexcept { return op_; }
  std::uint64_t probes() const noexcept { return probes_; }

private:
  std::string op_;
  std::uint64_t probes_;
};

// Witness search failure inside the dense-filtration / transversal
// constructions; carries the base-set index and stage.
class WitnessSearchExhausted : public Error {
public:
  WitnessSearchExhausted(std::size_t base_index, std::size_t stage,
                         std::uint64_t probes)
      : Error("WitnessSearchExhausted",
              "no fresh witness in base set U_" + std::to_string(base_index) +
                  " at stage " + std::to_string(stage) + " within " +
                  std::to_string(probes) + " probes"),
        base_index_(base_index), stage_(stage), probes_(probes) {}

  std::size_t base_index() const noexcept { return base_index_; }
  std::size_t stage() const noexcept { return stage_; }
  std::uint64_t probes() const noexcept { return probes_; }

private:
  std::size_t base_index_;
  std::size_t stage_;
  std::uint64_t probes_;
};

// decompose() was asked for an element outside the top of the chain.
class ElementOutsideChain : public Error {
public:
  explicit ElementOutsideChain(const std::string& elem)
      : Error("ElementOutsideChain",
              "element " + elem + " lies outside the filtration top") {}
};

// Bug trap: a fast pre-filter accepted a candidate the brute-force
// oracle rejects. Never expected to fire.
class FilterOracleMismatch : public Error {
public:
  explicit FilterOracleMismatch(const std::string& msg)
      : Error("FilterOracleMismatch", msg) {}
};

}  // namespace densefactor

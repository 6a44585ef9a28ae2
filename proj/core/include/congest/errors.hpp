#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace congest {

struct SimMetrics;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DisconnectedGraph : public Error {
 public:
  explicit DisconnectedGraph(std::size_t components)
      : Error("graph is disconnected (" + std::to_string(components) + " components)"),
        components_(components) {}
  std::size_t components() const { return components_; }

 private:
  std::size_t components_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class PayloadError : public Error {
 public:
  PayloadError(std::uint32_t node, std::uint64_t round, const std::string& what)
      : Error("node " + std::to_string(node) + " round " + std::to_string(round) + ": " + what),
        node_(node),
        round_(round) {}
  std::uint32_t node() const { return node_; }
  std::uint64_t round() const { return round_; }

 private:
  std::uint32_t node_;
  std::uint64_t round_;
};

class TimeoutError : public Error {
 public:
  TimeoutError(std::uint64_t max_rounds, std::shared_ptr<const SimMetrics> partial)
      : Error("round limit " + std::to_string(max_rounds) + " exceeded"),
        partial_(std::move(partial)) {}
  const SimMetrics* partial() const { return partial_.get(); }

 private:
  std::shared_ptr<const SimMetrics> partial_;
};

// Phase budget exhausted; raised instead of silently mis-simulating.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& where, std::uint64_t phase, std::uint64_t used, std::uint64_t budget)
      : Error("constants too small: " + where + " phase " + std::to_string(phase) + " used " +
              std::to_string(used) + " rounds, budget " + std::to_string(budget)),
        phase_(phase) {}
  std::uint64_t phase() const { return phase_; }

 private:
  std::uint64_t phase_;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// A randomized guarantee did not hold for this seed. Callers may retry with a
// derived seed.
class WhpFailure : public Error {
 public:
  WhpFailure(std::string bound, const std::string& what)
      : Error(bound + ": " + what), bound_(std::move(bound)) {}
  const std::string& bound() const { return bound_; }

 private:
  std::string bound_;
};

}  // namespace congest

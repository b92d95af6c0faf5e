#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vinolab {

// Error taxonomy shared by the whole library. The CLI maps these onto
// process exit codes: usage/config -> 2, resource limit -> 3.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateElement : public Error {
public:
  explicit DuplicateElement(const std::string& value)
      : Error("duplicate element in ground set: " + value) {}
};

class EmptyInput : public Error {
public:
  EmptyInput() : Error("empty input") {}
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

class InvalidSpec : public Error {
public:
  explicit InvalidSpec(const std::string& what) : Error("invalid family spec: " + what) {}
};

class ResourceLimit : public Error {
public:
  explicit ResourceLimit(const std::string& what) : Error("resource limit exceeded: " + what) {}
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch() : Error("vector dimensions do not match") {}
};

class ZeroElement : public Error {
public:
  ZeroElement() : Error("ground set contains 0; quotients are undefined") {}
};

class EmptyGraph : public Error {
public:
  EmptyGraph() : Error("tuple graph is empty") {}
};

class DegenerateAlpha : public Error {
public:
  explicit DegenerateAlpha(const std::string& what) : Error("degenerate alpha: " + what) {}
};

// A pipeline stage came out empty. At small scale this is an expected
// outcome and run_pipeline turns it into a structured trace entry.
class EmptyStage : public Error {
public:
  explicit EmptyStage(std::string stage_name)
      : Error("pipeline stage produced an empty set: " + stage_name),
        stage(std::move(stage_name)) {}
  std::string stage;
};

class HypothesisViolated : public Error {
public:
  explicit HypothesisViolated(const std::string& what) : Error("hypothesis violated: " + what) {}
};

class QuotientAbsent : public Error {
public:
  explicit QuotientAbsent(const std::string& q) : Error("quotient not in A/A: " + q) {}
};

class NonPositiveElements : public Error {
public:
  NonPositiveElements() : Error("operation requires strictly positive elements") {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error("io error: " + what) {}
};

// Enumeration budgets. Table caps bound associative-table sizes, iteration
// caps bound raw loop counts (naive oracles, literal predicates).
struct Caps {
  std::uint64_t table_entries = 100'000'000;
  std::uint64_t iterations = 1'000'000'000;
};

// Process-wide default, adjustable by the CLI (--cap / VINOLAB_CAP).
Caps& default_caps();

inline void check_table_cap(std::uint64_t size, const Caps& caps, const char* where) {
  if (size > caps.table_entries)
    throw ResourceLimit(std::string(where) + " would exceed " +
                        std::to_string(caps.table_entries) + " table entries");
}

inline void check_iteration_cap(double projected, const Caps& caps, const char* where) {
  if (projected > static_cast<double>(caps.iterations))
    throw ResourceLimit(std::string(where) + " would exceed " +
                        std::to_string(caps.iterations) + " iterations");
}

}  // namespace vinolab

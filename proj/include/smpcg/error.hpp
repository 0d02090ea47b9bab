#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smpcg {

enum class ErrorKind {
  parse,
  range,
  invalid_graph,
  invalid_weight,
  invalid_lt_weights,
  not_bipartite,
  domain,
  too_large,
  log_domain,
  infeasible,
  not_found,
  config,
};

const char* to_string(ErrorKind kind);

/// Base exception for every library failure; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when no candidate seed set reaches the requested guarantee.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_prob)
      : Error(ErrorKind::infeasible, what), best_prob_(best_prob) {}

  double best_prob() const noexcept { return best_prob_; }

 private:
  double best_prob_;
};

}  // namespace smpcg

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace abbm {

/// Root of the library's exception hierarchy. The CLI maps each subclass to an
/// exit code (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters: offspring law, rates, start position.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula (t <= 0, s outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation not meaningful for the data it was handed, e.g. asking a
/// kill-mode record for barrier crossers.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Population cap exceeded. Carries the checkpoint reached and, once
/// propagated through run_experiment, the replica index.
class ResourceError : public Error {
 public:
  ResourceError(std::string what, std::size_t checkpoint_index,
                std::optional<std::size_t> replica = std::nullopt)
      : Error(std::move(what)), checkpoint_index_(checkpoint_index), replica_(replica) {}

  std::size_t checkpoint_index() const noexcept { return checkpoint_index_; }
  std::optional<std::size_t> replica() const noexcept { return replica_; }

 private:
  std::size_t checkpoint_index_;
  std::optional<std::size_t> replica_;
};

/// Root-finding / fitting failure.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampler ran out of attempts.
class BudgetError : public Error {
 public:
  BudgetError(std::string what, double observed_acceptance)
      : Error(std::move(what)), observed_acceptance_(observed_acceptance) {}
  double observed_acceptance() const noexcept { return observed_acceptance_; }

 private:
  double observed_acceptance_;
};

/// An estimator received no usable samples.
class EmptyDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unknown configuration / schema.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Process exit codes: 0 ok, 2 config error, 3 runtime/resource error,
/// 4 numeric failure.
int exit_code(const std::exception& e) noexcept;

}  // namespace abbm

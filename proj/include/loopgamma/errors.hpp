#pragma once

#include <stdexcept>
#include <cstdint>
#include <string>

namespace loopgamma {

/// Invalid arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arguments outside the region where the quantity is defined or convergent.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine could not reach its requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Failure inside a user functional during Monte Carlo evaluation.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::uint64_t sample_index)
      : std::runtime_error(what + " (sample " + std::to_string(sample_index) + ")"),
        sample_index_(sample_index) {}
  std::uint64_t sample_index() const noexcept { return sample_index_; }

 private:
  std::uint64_t sample_index_;
};

}  // namespace loopgamma

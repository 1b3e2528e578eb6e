#pragma once

#include <stdexcept>
#include <string>

namespace starwell {

/// Closed-form parameter combination hits a pole (vanishing denominator).
class SingularParameter : public std::domain_error {
 public:
  explicit SingularParameter(const std::string& what) : std::domain_error(what) {}
};

/// Not enough data points to form the requested statistic.
class InsufficientData : public std::runtime_error {
 public:
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

/// A quantity that must be real/consistent by construction came out otherwise.
class InternalConsistencyError : public std::runtime_error {
 public:
  explicit InternalConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace starwell

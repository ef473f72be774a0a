#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace regulab {

/// Malformed or dimension-incompatible arguments, bad scenario fields.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scan or grid would exceed the configured point cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t requested)
      : std::runtime_error(what), requested_(requested) {}
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::size_t requested_;
};

/// A polyhedron turned out to be empty where a nonempty one was required.
class EmptinessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative routine hit its cap; carries the best iterate found.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, Eigen::VectorXd best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }

 private:
  Eigen::VectorXd best_;
};

}  // namespace regulab

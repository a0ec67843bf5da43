#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace varsel {

// Base of every error the library raises. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class RankDeficient : public Error {
 public:
  RankDeficient(std::size_t rank, std::size_t columns);
  std::size_t rank() const noexcept { return rank_; }
  std::size_t columns() const noexcept { return columns_; }

 private:
  std::size_t rank_;
  std::size_t columns_;
};

class HqcUndefined : public Error {
 public:
  using Error::Error;
};

class EmptySpace : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class Unstable : public Error {
 public:
  explicit Unstable(double radius);
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace varsel

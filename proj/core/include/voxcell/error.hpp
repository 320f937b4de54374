#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voxcell {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file does not hold the number of bytes its descriptor promises.
class SizeMismatchError : public Error {
 public:
  SizeMismatchError(std::size_t expected_bytes, std::size_t actual_bytes);

  std::size_t expected_bytes() const noexcept { return expected_; }
  std::size_t actual_bytes() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Argument outside the domain of a mathematical function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Dense matrix is numerically rank deficient.
class RankError : public Error {
 public:
  RankError(std::size_t rank, std::size_t size);

  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

/// Iterative solver produced a non-finite value.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t iteration);

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// A homogenization load case failed to converge.
class LoadCaseError : public Error {
 public:
  LoadCaseError(int load_case, const std::string& what);

  int load_case() const noexcept { return load_case_; }

 private:
  int load_case_;
};

}  // namespace voxcell

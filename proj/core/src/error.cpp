#include "voxcell/error.hpp"

namespace voxcell {

SizeMismatchError::SizeMismatchError(std::size_t expected_bytes, std::size_t actual_bytes)
    : Error("size mismatch: expected " + std::to_string(expected_bytes) + " bytes, found " +
            std::to_string(actual_bytes)),
      expected_(expected_bytes),
      actual_(actual_bytes) {}

RankError::RankError(std::size_t rank, std::size_t size)
    : Error("matrix is rank deficient: rank " + std::to_string(rank) + " of " +
            std::to_string(size)),
      rank_(rank) {}

DivergenceError::DivergenceError(std::size_t iteration)
    : Error("solver diverged: non-finite value at iteration " + std::to_string(iteration)),
      iteration_(iteration) {}

LoadCaseError::LoadCaseError(int load_case, const std::string& what)
    : Error("load case " + std::to_string(load_case) + ": " + what), load_case_(load_case) {}

}  // namespace voxcell

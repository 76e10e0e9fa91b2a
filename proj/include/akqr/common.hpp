#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace akqr {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Point sets are stored one point per row, coordinates contiguous.
template <typename Scalar>
using PointMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using PointMatrix = PointMatrixX<double>;

/// Malformed arguments, dimension mismatches, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values or failed factorizations.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The solver hit its epoch cap before reaching the requested duality gap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_gap)
      : std::runtime_error(what), last_gap_(last_gap) {}
  double last_gap() const noexcept { return last_gap_; }

 private:
  double last_gap_;
};

/// splitmix64 finaliser; used to derive independent per-job seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return mix_seed(a ^ mix_seed(b));
}

}  // namespace akqr

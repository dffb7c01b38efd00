#ifndef GSLAB_COMMON_HPP
#define GSLAB_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gslab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Error raised on invalid inputs (bad topology, malformed files, incompatible
/// scheme/mesh pairs). The message names the offending entity when known.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Error raised when an iterative solve fails to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Rotation of a vector by -90 degrees; maps a CCW edge direction to the
/// outward normal of the polygon it bounds.
inline Vec2 rot_cw(const Vec2& t) { return Vec2(t.y(), -t.x()); }

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so that results are identical across platforms and standard-library
/// implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : m_state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (m_state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1,1).
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

private:
  std::uint64_t m_state;
};

}  // namespace gslab

#endif

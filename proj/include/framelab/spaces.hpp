#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

#include "framelab/errors.hpp"

namespace framelab {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

template <typename Scalar>
inline constexpr bool is_complex_v = false;
template <typename Real>
inline constexpr bool is_complex_v<std::complex<Real>> = true;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

enum class ScalarKind { real, complex };

template <typename Scalar>
constexpr ScalarKind scalar_kind_of() {
  return is_complex_v<Scalar> ? ScalarKind::complex : ScalarKind::real;
}

/// The exponent value encoding p = infinity.
inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

inline bool is_inf_exponent(double p) { return std::isinf(p); }

inline std::string exponent_to_string(double p) {
  if (is_inf_exponent(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

/// Holder-conjugate exponent q with 1/p + 1/q = 1; q(1) = inf, q(inf) = 1.
inline double dual_exponent(double p) {
  if (!(p >= 1.0)) throw DomainError("dual_exponent: exponent must satisfy p >= 1, got " + std::to_string(p));
  if (p == 1.0) return kInfExponent;
  if (is_inf_exponent(p)) return 1.0;
  return p / (p - 1.0);
}

/// A finite-dimensional coordinate space carrying an l^p norm.
struct NormedSpace {
  Index dim = 0;
  double p = 2.0;
  ScalarKind scalar = ScalarKind::real;

  friend bool operator==(const NormedSpace& a, const NormedSpace& b) {
    return a.dim == b.dim && a.p == b.p && a.scalar == b.scalar;
  }
  friend bool operator!=(const NormedSpace& a, const NormedSpace& b) { return !(a == b); }
};

template <typename Scalar>
NormedSpace make_space(Index dim, double p) {
  if (dim < 1) throw DomainError("make_space: dimension must be >= 1");
  if (!(p >= 1.0)) throw DomainError("make_space: exponent must satisfy p >= 1");
  return NormedSpace{dim, p, scalar_kind_of<Scalar>()};
}

/// The dual space: same coordinates under the conjugate exponent.
inline NormedSpace dual(const NormedSpace& space) {
  return NormedSpace{space.dim, dual_exponent(space.p), space.scalar};
}

/// l^p norm of v measured in `space`. Scaled accumulation for general p,
/// so large entries do not overflow the power sum.
template <typename Scalar>
double norm(const Vec<Scalar>& v, const NormedSpace& space) {
  if (v.size() != space.dim) {
    throw ShapeError("norm: vector has dimension " + std::to_string(v.size()) + " but space expects " +
                     std::to_string(space.dim));
  }
  const auto abs = v.cwiseAbs();
  if (is_inf_exponent(space.p)) return abs.maxCoeff();
  if (space.p == 1.0) return abs.sum();
  if (space.p == 2.0) return v.stableNorm();
  const double top = abs.maxCoeff();
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < v.size(); ++i) sum += std::pow(abs[i] / top, space.p);
  return top * std::pow(sum, 1.0 / space.p);
}

template <typename Scalar>
double norm_p(const Vec<Scalar>& v, double p) {
  return norm<Scalar>(v, NormedSpace{v.size(), p, scalar_kind_of<Scalar>()});
}

/// Duality bracket: linear in x, conjugate-linear in y (plain bilinear for
/// real scalars). pairing(x, y) = sum_i x_i * conj(y_i).
template <typename Scalar>
Scalar pairing(const Vec<Scalar>& x, const Vec<Scalar>& y) {
  if (x.size() != y.size()) {
    throw ShapeError("pairing: dimensions disagree (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  return y.dot(x);  // Eigen's dot conjugates its first argument
}

}  // namespace framelab

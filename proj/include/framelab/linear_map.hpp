#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <limits>
#include <string>
#include <utility>

#include "framelab/errors.hpp"
#include "framelab/spaces.hpp"

namespace framelab {

inline constexpr double kDefaultCondCap = 1e12;
inline constexpr double kDefaultKernelTol = 1e-10;
inline constexpr double kDefaultResidualTol = 1e-10;

/// Dense linear map between two normed spaces.
/// entries has codomain.dim rows and domain.dim columns.
template <typename Scalar>
struct LinearMap {
  Mat<Scalar> entries;
  NormedSpace domain;
  NormedSpace codomain;
};

template <typename Scalar>
LinearMap<Scalar> make_linear_map(Mat<Scalar> entries, const NormedSpace& domain, const NormedSpace& codomain) {
  if (entries.rows() != codomain.dim || entries.cols() != domain.dim) {
    throw ShapeError("make_linear_map: entry array is " + std::to_string(entries.rows()) + "x" +
                     std::to_string(entries.cols()) + " but spaces expect " + std::to_string(codomain.dim) + "x" +
                     std::to_string(domain.dim));
  }
  return LinearMap<Scalar>{std::move(entries), domain, codomain};
}

template <typename Scalar>
LinearMap<Scalar> identity_map(const NormedSpace& space) {
  return LinearMap<Scalar>{Mat<Scalar>::Identity(space.dim, space.dim), space, space};
}

template <typename Scalar>
LinearMap<Scalar> zero_map(const NormedSpace& domain, const NormedSpace& codomain) {
  return LinearMap<Scalar>{Mat<Scalar>::Zero(codomain.dim, domain.dim), domain, codomain};
}

template <typename Scalar>
Vec<Scalar> apply(const LinearMap<Scalar>& M, const Vec<Scalar>& v) {
  if (v.size() != M.domain.dim) {
    throw ShapeError("apply: vector dimension " + std::to_string(v.size()) + " does not match domain dimension " +
                     std::to_string(M.domain.dim));
  }
  return M.entries * v;
}

/// Conjugate transpose; domain and codomain swap to their duals, so
/// pairing(M v, w) == pairing(v, adjoint(M) w) for all v, w.
template <typename Scalar>
LinearMap<Scalar> adjoint(const LinearMap<Scalar>& M) {
  return LinearMap<Scalar>{M.entries.adjoint(), dual(M.codomain), dual(M.domain)};
}

template <typename Scalar>
LinearMap<Scalar> compose(const LinearMap<Scalar>& A, const LinearMap<Scalar>& B) {
  if (B.codomain != A.domain) {
    throw ShapeError("compose: codomain of right factor does not match domain of left factor");
  }
  return LinearMap<Scalar>{A.entries * B.entries, B.domain, A.codomain};
}

template <typename Scalar>
LinearMap<Scalar> operator*(const LinearMap<Scalar>& A, const LinearMap<Scalar>& B) {
  return compose(A, B);
}

template <typename Scalar>
LinearMap<Scalar> operator+(const LinearMap<Scalar>& A, const LinearMap<Scalar>& B) {
  if (A.domain != B.domain || A.codomain != B.codomain) throw ShapeError("operator+: spaces disagree");
  return LinearMap<Scalar>{A.entries + B.entries, A.domain, A.codomain};
}

template <typename Scalar>
LinearMap<Scalar> operator-(const LinearMap<Scalar>& A, const LinearMap<Scalar>& B) {
  if (A.domain != B.domain || A.codomain != B.codomain) throw ShapeError("operator-: spaces disagree");
  return LinearMap<Scalar>{A.entries - B.entries, A.domain, A.codomain};
}

template <typename Scalar>
LinearMap<Scalar> operator*(Scalar c, const LinearMap<Scalar>& M) {
  return LinearMap<Scalar>{c * M.entries, M.domain, M.codomain};
}

/// Euclidean operator norm (largest singular value).
template <typename Scalar>
double operator_norm2(const Mat<Scalar>& entries) {
  if (entries.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat<Scalar>> svd(entries);
  return svd.singularValues()(0);
}

template <typename Scalar>
double operator_norm2(const LinearMap<Scalar>& M) {
  return operator_norm2<Scalar>(M.entries);
}

/// Orthonormal basis of the numerical null space. `tolerance` is the
/// absolute singular-value threshold that was applied (tol * sigma_max).
template <typename Scalar>
struct KernelBasis {
  Mat<Scalar> vectors;  // domain.dim x k, orthonormal columns
  double tolerance = 0.0;

  Index count() const { return vectors.cols(); }
  bool empty() const { return vectors.cols() == 0; }
};

/// Numerical kernel at relative threshold tol: right singular vectors whose
/// singular value is <= tol * sigma_max.
template <typename Scalar>
KernelBasis<Scalar> kernel_basis(const LinearMap<Scalar>& M, double tol = kDefaultKernelTol) {
  if (!(tol > 0.0)) throw DomainError("kernel_basis: tolerance must be positive");
  Eigen::JacobiSVD<Mat<Scalar>> svd(M.entries, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Index n = M.entries.cols();
  const Index nsv = sv.size();
  const double sigma_max = nsv > 0 ? sv(0) : 0.0;
  const double threshold = tol * sigma_max;
  Index rank = 0;
  for (Index i = 0; i < nsv; ++i) {
    if (sv(i) > threshold) ++rank;
  }
  KernelBasis<Scalar> basis;
  basis.tolerance = threshold;
  basis.vectors = svd.matrixV().rightCols(n - rank);
  return basis;
}

/// Orthogonal projector onto the span of the basis columns.
template <typename Scalar>
Mat<Scalar> span_projector(const KernelBasis<Scalar>& basis, Index dim) {
  if (basis.empty()) return Mat<Scalar>::Zero(dim, dim);
  return basis.vectors * basis.vectors.adjoint();
}

struct InvertibilityResult {
  bool invertible = false;
  double condition = std::numeric_limits<double>::infinity();
};

/// Invertibility gate: true iff sigma_min > 0 and kappa <= cond_cap.
template <typename Scalar>
InvertibilityResult is_invertible(const LinearMap<Scalar>& M, double cond_cap = kDefaultCondCap) {
  if (M.entries.rows() != M.entries.cols()) throw ShapeError("is_invertible: map must be square");
  if (!(cond_cap > 1.0)) throw DomainError("is_invertible: cond_cap must exceed 1");
  Eigen::JacobiSVD<Mat<Scalar>> svd(M.entries);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv(0);
  const double sigma_min = sv(sv.size() - 1);
  if (sigma_min <= 0.0) return InvertibilityResult{false, std::numeric_limits<double>::infinity()};
  const double kappa = sigma_max / sigma_min;
  return InvertibilityResult{kappa <= cond_cap, kappa};
}

template <typename Scalar>
LinearMap<Scalar> inverse(const LinearMap<Scalar>& M, double cond_cap = kDefaultCondCap) {
  const InvertibilityResult inv = is_invertible(M, cond_cap);
  if (!inv.invertible) {
    throw SingularOperatorError("inverse: map fails the conditioning gate (condition " +
                                    std::to_string(inv.condition) + ", cap " + std::to_string(cond_cap) + ")",
                                inv.condition);
  }
  Mat<Scalar> entries = M.entries.partialPivLu().solve(Mat<Scalar>::Identity(M.entries.rows(), M.entries.cols()));
  return LinearMap<Scalar>{std::move(entries), M.codomain, M.domain};
}

/// Complementary oblique projectors derived from a reconstructing pair:
/// Q = Rt*S projects onto Im(Rt) along Ker(S), P = I - Q onto Ker(S) along Im(Rt).
template <typename Scalar>
struct ProjectorPair {
  LinearMap<Scalar> Q;
  LinearMap<Scalar> P;
};

template <typename Scalar>
ProjectorPair<Scalar> projector_pair(const LinearMap<Scalar>& S, const LinearMap<Scalar>& Rt,
                                     double tol = kDefaultResidualTol) {
  if (Rt.codomain != S.domain || S.codomain != Rt.domain) {
    throw ShapeError("projector_pair: S and Rt are not composable in both orders");
  }
  const Mat<Scalar> recon = S.entries * Rt.entries;
  const double residual =
      operator_norm2<Scalar>(recon - Mat<Scalar>::Identity(recon.rows(), recon.cols()));
  if (residual > tol) {
    throw PreconditionError("projector_pair: S*Rt deviates from the identity by " + std::to_string(residual) +
                            " which exceeds tolerance " + std::to_string(tol));
  }
  LinearMap<Scalar> Q = compose(Rt, S);
  LinearMap<Scalar> P = identity_map<Scalar>(S.domain) - Q;
  return ProjectorPair<Scalar>{std::move(Q), std::move(P)};
}

}  // namespace framelab

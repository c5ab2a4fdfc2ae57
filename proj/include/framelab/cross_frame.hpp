#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "framelab/errors.hpp"
#include "framelab/extremal.hpp"
#include "framelab/frames.hpp"
#include "framelab/linear_map.hpp"
#include "framelab/rng.hpp"
#include "framelab/spaces.hpp"

namespace framelab {

/// Candidate co-frame/frame pair ({x_n}, {y_n}). Construction only checks
/// shapes; whether the pair actually reconstructs is decided by the
/// verification operations below.
template <typename Scalar>
struct CrossFramePair {
  FrameFamily<Scalar> coframe;  // the x_n in X
  FrameFamily<Scalar> frame;    // the y_n in X*
  double tol = kDefaultResidualTol;
};

template <typename Scalar>
CrossFramePair<Scalar> make_cross_frame_pair(Mat<Scalar> x_vectors, Mat<Scalar> y_vectors, double p, double r,
                                             double tol = kDefaultResidualTol) {
  if (x_vectors.rows() != y_vectors.rows() || x_vectors.cols() != y_vectors.cols()) {
    throw ShapeError("make_cross_frame_pair: the two families must share n and m");
  }
  return CrossFramePair<Scalar>{make_family(std::move(x_vectors), p, r, FamilySide::coframe),
                                make_family(std::move(y_vectors), p, r, FamilySide::frame), tol};
}

/// The four operators of a pair. dual_analysis and dual_synthesis are the
/// entrywise adjoints of synthesis and analysis, which is exactly what makes
/// pairing(S a, y) == pairing(a, R y) an identity.
template <typename Scalar>
struct OperatorBundle {
  LinearMap<Scalar> synthesis;       // S : X_d -> X, columns x_n
  LinearMap<Scalar> analysis;        // Rt: X -> X_d, x |-> {pairing(x, y_n)}
  LinearMap<Scalar> dual_analysis;   // R = S* : X* -> X_d*
  LinearMap<Scalar> dual_synthesis;  // St = Rt*: X_d* -> X*
};

template <typename Scalar>
OperatorBundle<Scalar> build_operators(const CrossFramePair<Scalar>& pair) {
  if (pair.coframe.ambient != pair.frame.ambient || pair.coframe.coeff != pair.frame.coeff) {
    throw ShapeError("build_operators: families live in different spaces");
  }
  OperatorBundle<Scalar> bundle{coframe_synthesis(pair.coframe), frame_analysis(pair.frame),
                                LinearMap<Scalar>{}, LinearMap<Scalar>{}};
  bundle.dual_analysis = adjoint(bundle.synthesis);
  bundle.dual_synthesis = adjoint(bundle.analysis);
  return bundle;
}

enum class ReconstructionIdentity { primal, dual };

/// Residuals of a reconstruction identity: Euclidean operator norm of the
/// defect plus the worst defect over a seeded batch of random samples.
struct ResidualReport {
  ReconstructionIdentity identity = ReconstructionIdentity::primal;
  double operator_residual = 0.0;
  double max_sample_residual = 0.0;
  int samples = 0;
  double tol = kDefaultResidualTol;
  bool passed = false;
};

namespace detail {

template <typename Scalar>
double worst_sample_residual(const Mat<Scalar>& defect, int samples, std::uint64_t seed, const char* tag) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Rng rng = Rng::split(seed, tag, static_cast<std::uint64_t>(s));
    Vec<Scalar> v(defect.cols());
    for (Index i = 0; i < v.size(); ++i) v[i] = rng.scalar_gaussian<Scalar>();
    if (v.norm() > 0.0) v.normalize();
    worst = std::max(worst, (defect * v).norm());
  }
  return worst;
}

}  // namespace detail

/// Identity (primal form): x == sum_n pairing(x, y_n) x_n, i.e. S*Rt == I on X.
template <typename Scalar>
ResidualReport verify_reconstruction(const CrossFramePair<Scalar>& pair, int samples = 32, std::uint64_t seed = 0) {
  const OperatorBundle<Scalar> bundle = build_operators(pair);
  const Mat<Scalar> defect = (bundle.synthesis * bundle.analysis).entries -
                             Mat<Scalar>::Identity(pair.coframe.ambient.dim, pair.coframe.ambient.dim);
  ResidualReport report;
  report.identity = ReconstructionIdentity::primal;
  report.operator_residual = operator_norm2<Scalar>(defect);
  report.max_sample_residual = detail::worst_sample_residual<Scalar>(defect, samples, seed, "verify-sample");
  report.samples = samples;
  report.tol = pair.tol;
  report.passed = report.operator_residual <= pair.tol;
  return report;
}

/// Derived identity (dual form): y == sum_n conj(pairing(x_n, y)) y_n,
/// i.e. Rt* S* == I on X*. If the primal identity fails, its report is
/// returned instead and nothing is claimed about the dual form.
template <typename Scalar>
ResidualReport derived_dual_reconstruction(const CrossFramePair<Scalar>& pair, int samples = 32,
                                           std::uint64_t seed = 0) {
  ResidualReport primal = verify_reconstruction(pair, samples, seed);
  if (!primal.passed) return primal;

  const OperatorBundle<Scalar> bundle = build_operators(pair);
  const Mat<Scalar> defect = (bundle.dual_synthesis * bundle.dual_analysis).entries -
                             Mat<Scalar>::Identity(pair.coframe.ambient.dim, pair.coframe.ambient.dim);
  ResidualReport report;
  report.identity = ReconstructionIdentity::dual;
  report.operator_residual = operator_norm2<Scalar>(defect);
  report.max_sample_residual = detail::worst_sample_residual<Scalar>(defect, samples, seed, "derived-sample");
  report.samples = samples;
  report.tol = pair.tol;
  report.passed = report.operator_residual <= pair.tol;
  return report;
}

/// Full certificate: reconstruction residuals plus the four constants of the
/// two defining inequalities, with positivity of both lower bounds.
template <typename Scalar>
struct CrossFrameCertificate {
  bool certified = false;
  ResidualReport primal;
  ResidualReport dual;
  std::optional<FrameBounds<Scalar>> frame_side;    // A, B for {y_n}
  std::optional<FrameBounds<Scalar>> coframe_side;  // At, Bt for {x_n}
};

template <typename Scalar>
CrossFrameCertificate<Scalar> certify_cross_frame(const CrossFramePair<Scalar>& pair, int restarts,
                                                  std::uint64_t seed) {
  CrossFrameCertificate<Scalar> cert;
  cert.primal = verify_reconstruction(pair, 32, seed);
  if (!cert.primal.passed) return cert;
  cert.dual = derived_dual_reconstruction(pair, 32, seed);
  cert.frame_side = frame_bounds(pair.frame, restarts, seed);
  cert.coframe_side = coframe_bounds(pair.coframe, restarts, seed);
  cert.certified = cert.dual.passed && cert.frame_side->is_frame && cert.coframe_side->is_frame;
  return cert;
}

/// Outcome of an equivalence test: the operator, its conditioning, and on
/// success the transformed family witnessing alternate duality.
template <typename Scalar>
struct EquivalenceResult {
  LinearMap<Scalar> op;
  bool equivalent = false;
  double condition = 0.0;
  double residual = 0.0;
  std::optional<FrameFamily<Scalar>> transformed;
};

/// U x = sum_n pairing(x, y_n) x_n for a candidate co-frame family; the
/// candidate is equivalent to an alternate dual of the pair's frame exactly
/// when U is invertible, witnessed by {U^{-1} x_n}.
template <typename Scalar>
EquivalenceResult<Scalar> equivalence_operator_U(const CrossFramePair<Scalar>& pair,
                                                 const FrameFamily<Scalar>& candidate,
                                                 double cond_cap = kDefaultCondCap) {
  if (candidate.side != FamilySide::coframe) throw DomainError("equivalence_operator_U: candidate must be a co-frame");
  if (candidate.ambient != pair.coframe.ambient || candidate.coeff != pair.coframe.coeff) {
    throw ShapeError("equivalence_operator_U: candidate spaces do not match the pair");
  }
  const OperatorBundle<Scalar> bundle = build_operators(pair);
  EquivalenceResult<Scalar> result;
  result.op = coframe_synthesis(candidate) * bundle.analysis;
  const InvertibilityResult inv = is_invertible(result.op, cond_cap);
  result.condition = inv.condition;
  if (!inv.invertible) return result;

  const LinearMap<Scalar> u_inv = inverse(result.op, cond_cap);
  Mat<Scalar> rows = candidate.vectors;
  for (Index k = 0; k < rows.rows(); ++k) {
    rows.row(k) = (u_inv.entries * rows.row(k).transpose()).transpose();
  }
  result.transformed = make_family(std::move(rows), candidate.ambient.p, candidate.coeff.p, FamilySide::coframe);
  CrossFramePair<Scalar> transformed_pair{*result.transformed, pair.frame, pair.tol};
  result.residual = verify_reconstruction(transformed_pair).operator_residual;
  result.equivalent = result.residual <= pair.tol;
  return result;
}

/// V y = sum_n conj(pairing(x_n, y)) y_n for a candidate frame family; on
/// success returns {V^{-1} y_n} and checks both reconstruction identities
/// of the transformed pair.
template <typename Scalar>
EquivalenceResult<Scalar> equivalence_operator_V(const CrossFramePair<Scalar>& pair,
                                                 const FrameFamily<Scalar>& candidate,
                                                 double cond_cap = kDefaultCondCap) {
  if (candidate.side != FamilySide::frame) throw DomainError("equivalence_operator_V: candidate must be a frame");
  if (candidate.ambient != pair.frame.ambient || candidate.coeff != pair.frame.coeff) {
    throw ShapeError("equivalence_operator_V: candidate spaces do not match the pair");
  }
  const OperatorBundle<Scalar> bundle = build_operators(pair);
  EquivalenceResult<Scalar> result;
  result.op = frame_synthesis(candidate) * bundle.dual_analysis;
  const InvertibilityResult inv = is_invertible(result.op, cond_cap);
  result.condition = inv.condition;
  if (!inv.invertible) return result;

  const LinearMap<Scalar> v_inv = inverse(result.op, cond_cap);
  Mat<Scalar> rows = candidate.vectors;
  for (Index k = 0; k < rows.rows(); ++k) {
    rows.row(k) = (v_inv.entries * rows.row(k).transpose()).transpose();
  }
  result.transformed = make_family(std::move(rows), candidate.ambient.p, candidate.coeff.p, FamilySide::frame);
  CrossFramePair<Scalar> transformed_pair{pair.coframe, *result.transformed, pair.tol};
  const double dual_residual = derived_dual_reconstruction(transformed_pair).operator_residual;
  const double primal_residual = verify_reconstruction(transformed_pair).operator_residual;
  result.residual = std::max(dual_residual, primal_residual);
  result.equivalent = result.residual <= pair.tol;
  return result;
}

/// ({x_n}, {y_n}) |-> ({T x_n}, {(T^{-1})* y_n}); reconstruction residuals
/// are preserved up to the conditioning of T.
template <typename Scalar>
CrossFramePair<Scalar> transform_pair(const CrossFramePair<Scalar>& pair, const LinearMap<Scalar>& T,
                                      double cond_cap = kDefaultCondCap) {
  if (T.domain != pair.coframe.ambient || T.codomain != pair.coframe.ambient) {
    throw ShapeError("transform_pair: T must act on the pair's ambient space");
  }
  const LinearMap<Scalar> t_inv_adj = adjoint(inverse(T, cond_cap));
  Mat<Scalar> x_rows = pair.coframe.vectors;
  Mat<Scalar> y_rows = pair.frame.vectors;
  for (Index k = 0; k < x_rows.rows(); ++k) {
    x_rows.row(k) = (T.entries * x_rows.row(k).transpose()).transpose();
    y_rows.row(k) = (t_inv_adj.entries * y_rows.row(k).transpose()).transpose();
  }
  return make_cross_frame_pair(std::move(x_rows), std::move(y_rows), pair.coframe.ambient.p, pair.coframe.coeff.p,
                               pair.tol);
}

}  // namespace framelab

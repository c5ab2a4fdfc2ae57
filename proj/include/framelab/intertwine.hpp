#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "framelab/cross_frame.hpp"
#include "framelab/errors.hpp"
#include "framelab/linear_map.hpp"
#include "framelab/rng.hpp"
#include "framelab/spaces.hpp"

namespace framelab {

using Complex = std::complex<double>;

/// Result of testing A(N) inside N.
template <typename Scalar>
struct InvarianceReport {
  bool invariant = true;
  double worst_residual = 0.0;
  Index worst_index = -1;  // column of the kernel basis realizing the worst residual
  double threshold = 0.0;
  Vec<Scalar> violating;   // populated when invariant == false
};

/// For each kernel vector v, measures the component of A v outside span(N).
/// Invariant iff the worst residual stays below tol * ||A||.
template <typename Scalar>
InvarianceReport<Scalar> check_invariance(const LinearMap<Scalar>& A, const KernelBasis<Scalar>& N,
                                          double tol = kDefaultResidualTol) {
  if (A.entries.rows() != A.entries.cols()) throw ShapeError("check_invariance: A must be square");
  InvarianceReport<Scalar> report;
  report.threshold = tol * operator_norm2(A);
  if (N.empty()) return report;
  if (N.vectors.rows() != A.entries.cols()) {
    throw ShapeError("check_invariance: kernel basis dimension does not match A");
  }
  const Mat<Scalar> proj = span_projector(N, A.entries.cols());
  for (Index k = 0; k < N.count(); ++k) {
    const Vec<Scalar> image = A.entries * N.vectors.col(k);
    const double residual = (image - proj * image).norm();
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      report.worst_index = k;
    }
  }
  if (report.worst_residual > report.threshold) {
    report.invariant = false;
    report.violating = N.vectors.col(report.worst_index);
  }
  return report;
}

/// A partner operator produced by the intertwining constructions, with the
/// defect ||S A - B S|| that certifies the commuting square.
template <typename Scalar>
struct IntertwineResult {
  LinearMap<Scalar> partner;
  double residual = 0.0;
  double uniqueness_residual = 0.0;
  // For lifted operators: the principal part Rt*B*S and the kernel-ranged part.
  std::optional<std::pair<LinearMap<Scalar>, LinearMap<Scalar>>> decomposition;
};

namespace detail {

template <typename Scalar>
std::string format_vector(const Vec<Scalar>& v) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ")";
  return os.str();
}

}  // namespace detail

/// Pushes A : X_d -> X_d forward through the synthesis operator to the
/// unique B : X -> X with S A = B S, namely B = S A Rt. Requires A(N) in N.
template <typename Scalar>
IntertwineResult<Scalar> push_forward_B(const LinearMap<Scalar>& A, const OperatorBundle<Scalar>& bundle,
                                        double tol = kDefaultResidualTol) {
  const KernelBasis<Scalar> N = kernel_basis(bundle.synthesis);
  const InvarianceReport<Scalar> inv = check_invariance(A, N, tol);
  if (!inv.invariant) {
    throw PreconditionError("push_forward_B: A does not preserve the null-series space; kernel vector " +
                            detail::format_vector(inv.violating) + " is mapped off span(N) with residual " +
                            std::to_string(inv.worst_residual));
  }
  IntertwineResult<Scalar> result;
  result.partner = bundle.synthesis * A * bundle.analysis;
  result.residual = operator_norm2<Scalar>((bundle.synthesis * A).entries - (result.partner * bundle.synthesis).entries);

  // Well-definedness probe: B x must not depend on which preimage of x is
  // fed through S A. Preimages differ by kernel directions only.
  for (int s = 0; s < 8; ++s) {
    Rng rng = Rng::split(0, "push-forward-uniqueness", static_cast<std::uint64_t>(s));
    Vec<Scalar> x(bundle.synthesis.codomain.dim);
    for (Index i = 0; i < x.size(); ++i) x[i] = rng.scalar_gaussian<Scalar>();
    const Vec<Scalar> a1 = bundle.analysis.entries * x;
    Vec<Scalar> a2 = a1;
    for (Index k = 0; k < N.count(); ++k) a2 += Scalar(rng.gaussian()) * N.vectors.col(k);
    const double disagreement =
        (bundle.synthesis.entries * (A.entries * a1) - bundle.synthesis.entries * (A.entries * a2)).norm();
    result.uniqueness_residual = std::max(result.uniqueness_residual, disagreement);
  }
  return result;
}

/// Specification of the kernel-ranged summand A_0 in A = Rt B S + A_0.
template <typename Scalar>
struct NullPartSpec {
  enum class Kind { zero, random_in_kernel, given };
  Kind kind = Kind::zero;
  std::optional<LinearMap<Scalar>> map;

  static NullPartSpec zero() { return NullPartSpec{Kind::zero, std::nullopt}; }
  static NullPartSpec random_in_kernel() { return NullPartSpec{Kind::random_in_kernel, std::nullopt}; }
  static NullPartSpec given(LinearMap<Scalar> m) { return NullPartSpec{Kind::given, std::move(m)}; }
};

/// Lifts B : X -> X to A = Rt B S + A_0 on X_d, the general solution of
/// S A = B S. The random choice draws A_0 = (kernel direction) x (random
/// functional); any explicit A_0 must map into N, checked as ||S A_0|| <= tol.
template <typename Scalar>
IntertwineResult<Scalar> lift_A(const LinearMap<Scalar>& B, const OperatorBundle<Scalar>& bundle,
                                const NullPartSpec<Scalar>& null_part, std::uint64_t seed,
                                double tol = kDefaultResidualTol) {
  const NormedSpace& coeff = bundle.synthesis.domain;
  if (B.domain != bundle.synthesis.codomain || B.codomain != bundle.synthesis.codomain) {
    throw ShapeError("lift_A: B must act on the ambient space of the synthesis operator");
  }

  LinearMap<Scalar> a0 = zero_map<Scalar>(coeff, coeff);
  switch (null_part.kind) {
    case NullPartSpec<Scalar>::Kind::zero:
      break;
    case NullPartSpec<Scalar>::Kind::random_in_kernel: {
      const KernelBasis<Scalar> N = kernel_basis(bundle.synthesis);
      if (!N.empty()) {
        Rng rng = Rng::split(seed, "lift-null-part", 0);
        Vec<Scalar> direction = Vec<Scalar>::Zero(coeff.dim);
        for (Index k = 0; k < N.count(); ++k) direction += Scalar(rng.gaussian()) * N.vectors.col(k);
        if (direction.norm() == 0.0) direction = N.vectors.col(0);
        direction.normalize();
        Vec<Scalar> functional(coeff.dim);
        for (Index i = 0; i < coeff.dim; ++i) functional[i] = rng.scalar_gaussian<Scalar>();
        a0.entries = direction * functional.adjoint();
      }
      break;
    }
    case NullPartSpec<Scalar>::Kind::given:
      a0 = *null_part.map;
      if (a0.domain != coeff || a0.codomain != coeff) throw ShapeError("lift_A: A0 must act on the coefficient space");
      break;
  }

  const double escape = operator_norm2<Scalar>((bundle.synthesis * a0).entries);
  if (escape > tol) {
    throw PreconditionError("lift_A: A0 range escapes the null-series space, ||S A0|| = " + std::to_string(escape));
  }

  IntertwineResult<Scalar> result;
  LinearMap<Scalar> principal = bundle.analysis * B * bundle.synthesis;
  result.partner = principal + a0;
  result.residual =
      operator_norm2<Scalar>((bundle.synthesis * result.partner).entries - (B * bundle.synthesis).entries);
  result.decomposition = std::make_pair(std::move(principal), std::move(a0));
  return result;
}

/// Residuals of the completeness argument: any intertwining A decomposes as
/// Rt B S plus a kernel-ranged A_0, and that A_0 equals AP + PA - PAP.
struct CompletenessReport {
  bool complete = false;
  double intertwine_residual = 0.0;
  double range_residual = 0.0;
  double formula_residual = 0.0;
};

template <typename Scalar>
CompletenessReport completeness_check(const LinearMap<Scalar>& A, const LinearMap<Scalar>& B,
                                      const OperatorBundle<Scalar>& bundle, double tol = kDefaultResidualTol) {
  CompletenessReport report;
  report.intertwine_residual =
      operator_norm2<Scalar>((bundle.synthesis * A).entries - (B * bundle.synthesis).entries);
  if (report.intertwine_residual > tol) return report;

  const Mat<Scalar> a0 = A.entries - (bundle.analysis * B * bundle.synthesis).entries;
  report.range_residual = operator_norm2<Scalar>(Mat<Scalar>(bundle.synthesis.entries * a0));

  const Index n = A.entries.rows();
  const Mat<Scalar> P = Mat<Scalar>::Identity(n, n) - (bundle.analysis * bundle.synthesis).entries;
  const Mat<Scalar> explicit_a0 = A.entries * P + P * A.entries - P * A.entries * P;
  report.formula_residual = operator_norm2<Scalar>(Mat<Scalar>(a0 - explicit_a0));

  report.complete = report.range_residual <= tol && report.formula_residual <= tol;
  return report;
}

/// One-parameter diagonal family data: frequencies, their separation, and
/// the synthesis map of the basis realizing T_t e_n = e^{i lambda_n t} e_n.
struct DiagonalGroup {
  Eigen::VectorXd lambdas;
  double delta = 0.0;
  LinearMap<Complex> basis_map;
};

/// T_t = diag(e^{i lambda_n t}) on a complex coefficient space.
inline LinearMap<Complex> build_diagonal_group(const Eigen::VectorXd& lambdas, double t, const NormedSpace& space) {
  if (space.scalar != ScalarKind::complex) {
    throw DomainError("build_diagonal_group: the space must carry complex scalars");
  }
  if (space.dim != lambdas.size()) {
    throw ShapeError("build_diagonal_group: lambda count " + std::to_string(lambdas.size()) +
                     " does not match dimension " + std::to_string(space.dim));
  }
  Mat<Complex> entries = Mat<Complex>::Zero(space.dim, space.dim);
  for (Index i = 0; i < space.dim; ++i) entries(i, i) = std::polar(1.0, lambdas[i] * t);
  return LinearMap<Complex>{std::move(entries), space, space};
}

struct GroupAxiomsReport {
  bool passed = false;
  double identity_residual = 0.0;       // max |T_0 - I| entrywise
  double law_residual = 0.0;            // max |T_t T_s - T_{t+s}| entrywise over samples
  double isometry_residual = 0.0;       // worst relative l^p defect, p in {1, 2, inf}
  double uniform_bound = 0.0;           // max_t ||T_t||_2, certified C = 1
};

/// Verifies the group axioms of the unimodular diagonal family on the
/// sampled parameters: T_0 = I, T_t T_s = T_{t+s}, and l^p isometry for
/// p in {1, 2, inf} (which pins the uniform bound at C = 1).
inline GroupAxiomsReport group_axioms_check(const Eigen::VectorXd& lambdas, const std::vector<double>& t_samples,
                                            double tol = 1e-12) {
  const NormedSpace space{lambdas.size(), 2.0, ScalarKind::complex};
  GroupAxiomsReport report;

  const LinearMap<Complex> t0 = build_diagonal_group(lambdas, 0.0, space);
  report.identity_residual =
      (t0.entries - Mat<Complex>::Identity(space.dim, space.dim)).cwiseAbs().maxCoeff();

  for (double t : t_samples) {
    for (double s : t_samples) {
      const LinearMap<Complex> lhs = build_diagonal_group(lambdas, t, space) * build_diagonal_group(lambdas, s, space);
      const LinearMap<Complex> rhs = build_diagonal_group(lambdas, t + s, space);
      report.law_residual = std::max(report.law_residual, (lhs.entries - rhs.entries).cwiseAbs().maxCoeff());
    }
  }

  for (double t : t_samples) {
    const LinearMap<Complex> tt = build_diagonal_group(lambdas, t, space);
    report.uniform_bound = std::max(report.uniform_bound, operator_norm2(tt));
    for (double p : {1.0, 2.0, kInfExponent}) {
      for (int s = 0; s < 8; ++s) {
        Rng rng = Rng::split(0, "group-isometry", static_cast<std::uint64_t>(s));
        Vec<Complex> x(space.dim);
        for (Index i = 0; i < x.size(); ++i) x[i] = rng.scalar_gaussian<Complex>();
        const double before = norm_p<Complex>(x, p);
        if (before == 0.0) continue;
        const double after = norm_p<Complex>(Vec<Complex>(tt.entries * x), p);
        report.isometry_residual = std::max(report.isometry_residual, std::abs(after - before) / before);
      }
    }
  }

  report.passed = report.identity_residual == 0.0 && report.law_residual <= tol &&
                  report.isometry_residual <= tol && std::abs(report.uniform_bound - 1.0) <= tol;
  return report;
}

enum class GroupVerdict { obstructed, group_exists };

/// Evidence returned for an obstructed family: at the sampled parameter the
/// coefficient-space diagonal action fails to preserve the null-series space.
struct ObstructionEvidence {
  double t = 0.0;
  std::vector<double> off_kernel_residuals;  // one per kernel basis vector
  double max_residual = 0.0;
};

struct ObstructionResult {
  GroupVerdict verdict = GroupVerdict::group_exists;
  KernelBasis<Complex> kernel;
  std::optional<DiagonalGroup> group;            // present when a group exists
  std::optional<ObstructionEvidence> evidence;   // present when obstructed
};

namespace detail {

// Parameter at which the diagonal entries e^{i lambda_n t} stay pairwise
// distinct, so the only invariant subspaces are coordinate-spanned.
inline double pick_separating_time(const Eigen::VectorXd& lambdas) {
  const std::vector<double> candidates{1.0, 0.5, 0.70710678118654752, 0.44879895051282761, 0.25, 0.1};
  double best_t = candidates.front();
  double best_sep = -1.0;
  for (double t : candidates) {
    double sep = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < lambdas.size(); ++i) {
      for (Index j = i + 1; j < lambdas.size(); ++j) {
        sep = std::min(sep, std::abs(std::polar(1.0, lambdas[i] * t) - std::polar(1.0, lambdas[j] * t)));
      }
    }
    if (sep > 1e-6) return t;
    if (sep > best_sep) {
      best_sep = sep;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace detail

/// Decides whether the pair's co-frame can carry a one-parameter diagonal
/// group with the given separated frequencies. A nontrivial null-series
/// space obstructs it: the diagonal action at the sampled parameter has
/// pairwise-distinct eigenvalues, hence preserves only coordinate-spanned
/// subspaces, and N contains no coordinate vector (that would force a zero
/// family member). An empty kernel is the basis case and the group exists.
template <typename Scalar>
ObstructionResult diagonal_group_obstruction(const CrossFramePair<Scalar>& pair, const Eigen::VectorXd& lambdas,
                                             double delta, double tol = kDefaultResidualTol) {
  if (!(delta > 0.0)) throw PreconditionError("diagonal_group_obstruction: delta must be positive");
  if (lambdas.size() != pair.coframe.coeff.dim) {
    throw ShapeError("diagonal_group_obstruction: lambda count does not match the family size");
  }
  for (Index i = 0; i < lambdas.size(); ++i) {
    for (Index j = i + 1; j < lambdas.size(); ++j) {
      if (!(std::abs(lambdas[i] - lambdas[j]) > delta)) {
        throw PreconditionError("diagonal_group_obstruction: lambdas " + std::to_string(i) + " and " +
                                std::to_string(j) + " (" + std::to_string(lambdas[i]) + ", " +
                                std::to_string(lambdas[j]) + ") are not separated by delta");
      }
    }
  }

  const Mat<Complex> synthesis_entries = pair.coframe.vectors.transpose().template cast<Complex>();
  NormedSpace coeff = pair.coframe.coeff;
  NormedSpace ambient = pair.coframe.ambient;
  coeff.scalar = ScalarKind::complex;
  ambient.scalar = ScalarKind::complex;
  const LinearMap<Complex> synthesis{synthesis_entries, coeff, ambient};

  ObstructionResult result;
  result.kernel = kernel_basis(synthesis);
  if (result.kernel.empty()) {
    result.verdict = GroupVerdict::group_exists;
    result.group = DiagonalGroup{lambdas, delta, synthesis};
    return result;
  }

  const Mat<Complex> proj = span_projector(result.kernel, coeff.dim);
  for (Index k = 0; k < coeff.dim; ++k) {
    const Vec<Complex> unit = Vec<Complex>::Unit(coeff.dim, k);
    if ((unit - proj * unit).norm() <= tol) {
      throw InvalidFamilyError("diagonal_group_obstruction: coordinate vector " + std::to_string(k) +
                               " lies in the null-series space, so member " + std::to_string(k) +
                               " is effectively zero");
    }
  }

  ObstructionEvidence evidence;
  evidence.t = detail::pick_separating_time(lambdas);
  const LinearMap<Complex> vt = build_diagonal_group(lambdas, evidence.t, coeff);
  for (Index k = 0; k < result.kernel.count(); ++k) {
    const Vec<Complex> image = vt.entries * result.kernel.vectors.col(k);
    const double residual = (image - proj * image).norm();
    evidence.off_kernel_residuals.push_back(residual);
    evidence.max_residual = std::max(evidence.max_residual, residual);
  }
  result.verdict = GroupVerdict::obstructed;
  result.evidence = std::move(evidence);
  return result;
}

}  // namespace framelab

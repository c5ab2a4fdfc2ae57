#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "framelab/errors.hpp"
#include "framelab/extremal.hpp"
#include "framelab/linear_map.hpp"
#include "framelab/spaces.hpp"

namespace framelab {

enum class FamilySide { frame, coframe };

/// A finite family of n vectors in an m-dimensional space, stored one
/// member per row. Frame families live in the dual X* (the y_n), co-frame
/// families in X itself (the x_n); both are measured against the
/// coefficient space X_d.
template <typename Scalar>
struct FrameFamily {
  Mat<Scalar> vectors;   // n x m, row k = member k
  NormedSpace ambient;   // X (dimension m, exponent p)
  NormedSpace coeff;     // X_d (dimension n, exponent r)
  FamilySide side = FamilySide::frame;

  Index count() const { return vectors.rows(); }
  Vec<Scalar> member(Index k) const { return vectors.row(k).transpose(); }
};

template <typename Scalar>
FrameFamily<Scalar> make_family(Mat<Scalar> vectors, double p, double r, FamilySide side) {
  if (vectors.rows() < 1 || vectors.cols() < 1) {
    throw InvalidFamilyError("make_family: family must have at least one member in at least one dimension");
  }
  for (Index k = 0; k < vectors.rows(); ++k) {
    if (vectors.row(k).norm() == 0.0) {
      throw InvalidFamilyError("make_family: member " + std::to_string(k) + " is the zero vector");
    }
  }
  const NormedSpace ambient = make_space<Scalar>(vectors.cols(), p);
  const NormedSpace coeff = make_space<Scalar>(vectors.rows(), r);
  return FrameFamily<Scalar>{std::move(vectors), ambient, coeff, side};
}

/// Analysis of a frame family: X -> X_d, x |-> {pairing(x, y_n)}.
template <typename Scalar>
LinearMap<Scalar> frame_analysis(const FrameFamily<Scalar>& F) {
  return LinearMap<Scalar>{F.vectors.conjugate(), F.ambient, F.coeff};
}

/// Analysis of a co-frame family acting on functionals: X* -> X_d*.
/// Same entry array as frame_analysis, measured between the dual spaces.
template <typename Scalar>
LinearMap<Scalar> coframe_analysis(const FrameFamily<Scalar>& F) {
  return LinearMap<Scalar>{F.vectors.conjugate(), dual(F.ambient), dual(F.coeff)};
}

/// Synthesis of a co-frame family: X_d -> X, a |-> sum a_n x_n.
template <typename Scalar>
LinearMap<Scalar> coframe_synthesis(const FrameFamily<Scalar>& F) {
  return LinearMap<Scalar>{F.vectors.transpose(), F.coeff, F.ambient};
}

/// Synthesis of a frame family: X_d* -> X*, b |-> sum b_n y_n.
template <typename Scalar>
LinearMap<Scalar> frame_synthesis(const FrameFamily<Scalar>& F) {
  return LinearMap<Scalar>{F.vectors.transpose(), dual(F.coeff), dual(F.ambient)};
}

/// Two-sided bound estimates for a family. is_frame records whether the
/// lower estimate cleared the positivity threshold relative to the upper.
template <typename Scalar>
struct FrameBounds {
  ExtremalResult<Scalar> lower;
  ExtremalResult<Scalar> upper;
  double p = 2.0;
  double r = 2.0;
  bool is_frame = false;
};

namespace detail {

template <typename Scalar>
FrameBounds<Scalar> bounds_of_map(const LinearMap<Scalar>& analysis, int restarts, std::uint64_t seed) {
  FrameBounds<Scalar> bounds;
  bounds.p = analysis.domain.p;
  bounds.r = analysis.codomain.p;
  bounds.lower = extremal(analysis, bounds.p, bounds.r, ExtremalMode::minimize, restarts, seed);
  bounds.upper = extremal(analysis, bounds.p, bounds.r, ExtremalMode::maximize, restarts, seed);
  bounds.is_frame = bounds.lower.value > kPositivityRel * bounds.upper.value;
  return bounds;
}

}  // namespace detail

/// Bounds A, B with A ||x||_p <= ||{pairing(x, y_n)}||_r <= B ||x||_p.
template <typename Scalar>
FrameBounds<Scalar> frame_bounds(const FrameFamily<Scalar>& F, int restarts, std::uint64_t seed) {
  if (F.side != FamilySide::frame) throw DomainError("frame_bounds: family is not a frame-side family");
  return detail::bounds_of_map(frame_analysis(F), restarts, seed);
}

/// Mirror bounds for a co-frame family, measured between the dual spaces.
template <typename Scalar>
FrameBounds<Scalar> coframe_bounds(const FrameFamily<Scalar>& F, int restarts, std::uint64_t seed) {
  if (F.side != FamilySide::coframe) throw DomainError("coframe_bounds: family is not a coframe-side family");
  return detail::bounds_of_map(coframe_analysis(F), restarts, seed);
}

template <typename Scalar>
struct BesselResult {
  bool bessel = true;  // every finite family is Bessel
  ExtremalResult<Scalar> upper;
};

template <typename Scalar>
BesselResult<Scalar> is_bessel(const FrameFamily<Scalar>& F, int restarts, std::uint64_t seed) {
  const LinearMap<Scalar> analysis = F.side == FamilySide::frame ? frame_analysis(F) : coframe_analysis(F);
  BesselResult<Scalar> result;
  result.upper = extremal(analysis, analysis.domain.p, analysis.codomain.p, ExtremalMode::maximize, restarts, seed);
  return result;
}

/// Squared-form Hilbert bounds (sigma_min^2, sigma_max^2) of the analysis
/// map; only defined at p = r = 2.
template <typename Scalar>
std::pair<double, double> hilbert_frame_bounds(const FrameFamily<Scalar>& F) {
  if (F.ambient.p != 2.0 || F.coeff.p != 2.0) {
    throw DomainError("hilbert_frame_bounds: requires p = r = 2, got p = " + exponent_to_string(F.ambient.p) +
                      ", r = " + exponent_to_string(F.coeff.p));
  }
  const LinearMap<Scalar> analysis = F.side == FamilySide::frame ? frame_analysis(F) : coframe_analysis(F);
  const double lo = svd_oracle(analysis, ExtremalMode::minimize).value;
  const double hi = svd_oracle(analysis, ExtremalMode::maximize).value;
  return {lo * lo, hi * hi};
}

}  // namespace framelab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "framelab/extremal.hpp"
#include "test_support.hpp"

using Complex = std::complex<double>;

namespace {

fl::LinearMap<double> analysis_of(const fl::Mat<double>& rows) {
  return fl::make_linear_map<double>(rows, fl::make_space<double>(rows.cols(), 2.0),
                                     fl::make_space<double>(rows.rows(), 2.0));
}

void check_witness_feasible(const fl::LinearMap<double>& M, const fl::ExtremalResult<double>& r, double p_in,
                            double p_out) {
  CHECK(fl::norm_p<double>(r.witness, p_in) == doctest::Approx(1.0).epsilon(1e-10));
  const double reproduced = fl::norm_p<double>(fl::Vec<double>(M.entries * r.witness), p_out);
  CHECK(std::abs(reproduced - r.value) <= 1e-8 * std::max(1.0, r.value));
}

}  // namespace

TEST_CASE("svd oracle on fixed maps") {
  const auto id = fl::identity_map<double>(fl::make_space<double>(3, 2.0));
  CHECK(fl::svd_oracle(id, fl::ExtremalMode::minimize).value == doctest::Approx(1.0));
  CHECK(fl::svd_oracle(id, fl::ExtremalMode::maximize).value == doctest::Approx(1.0));

  const auto mercedes = analysis_of(mercedes_rows());
  const double tight = std::sqrt(1.5);
  CHECK(fl::svd_oracle(mercedes, fl::ExtremalMode::minimize).value == doctest::Approx(tight).epsilon(1e-12));
  CHECK(fl::svd_oracle(mercedes, fl::ExtremalMode::maximize).value == doctest::Approx(tight).epsilon(1e-12));

  fl::Mat<double> rank1(3, 2);
  rank1 << 1, 2, 2, 4, 3, 6;
  const auto deficient = analysis_of(rank1);
  CHECK(fl::svd_oracle(deficient, fl::ExtremalMode::minimize).value == doctest::Approx(0.0).epsilon(1e-12));

  const auto max_res = fl::svd_oracle(deficient, fl::ExtremalMode::maximize);
  CHECK(max_res.witness.norm() == doctest::Approx(1.0));
  CHECK((rank1 * max_res.witness).norm() == doctest::Approx(max_res.value).epsilon(1e-12));
}

TEST_CASE("extremal on fixed maps at p = r = 2") {
  const auto ortho = analysis_of(ortho2_rows());
  const auto min_res = fl::extremal(ortho, 2.0, 2.0, fl::ExtremalMode::minimize, 8, 0);
  CHECK(min_res.value == doctest::Approx(1.0).epsilon(1e-9));
  check_witness_feasible(ortho, min_res, 2.0, 2.0);

  const auto mercedes = analysis_of(mercedes_rows());
  const auto tight = fl::extremal(mercedes, 2.0, 2.0, fl::ExtremalMode::minimize, 8, 0);
  CHECK(tight.value == doctest::Approx(std::sqrt(1.5)).epsilon(1e-8));

  fl::Mat<double> d(2, 2);
  d << 1, 0, 0, 3;
  const auto diag = analysis_of(d);
  const auto max_res = fl::extremal(diag, 2.0, 2.0, fl::ExtremalMode::maximize, 8, 0);
  CHECK(max_res.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(max_res.witness[1]) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("extremal input guards and zero map") {
  const auto ortho = analysis_of(ortho2_rows());
  CHECK_THROWS_AS(fl::extremal(ortho, 0.5, 2.0, fl::ExtremalMode::minimize, 4, 0), fl::DomainError);
  CHECK_THROWS_AS(fl::extremal(ortho, 2.0, 2.0, fl::ExtremalMode::minimize, 0, 0), fl::DomainError);

  const auto zero = fl::zero_map<double>(fl::make_space<double>(3, 2.0), fl::make_space<double>(2, 2.0));
  const auto res = fl::extremal(zero, 2.0, 2.0, fl::ExtremalMode::maximize, 4, 0);
  CHECK(res.value == 0.0);
  CHECK(fl::norm_p<double>(res.witness, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("optimizer matches the SVD oracle on random maps") {
  for (int trial = 0; trial < 20; ++trial) {
    fl::Rng rng = fl::Rng::split(23, "oracle-agreement", trial);
    const fl::Index rows = 1 + static_cast<fl::Index>(rng.below(6));
    const fl::Index cols = 1 + static_cast<fl::Index>(rng.below(6));
    const auto M = fl::make_linear_map<double>(random_matrix<double>(rows, cols, rng),
                                               fl::make_space<double>(cols, 2.0), fl::make_space<double>(rows, 2.0));
    const double sigma_max = fl::svd_oracle(M, fl::ExtremalMode::maximize).value;
    for (const auto mode : {fl::ExtremalMode::minimize, fl::ExtremalMode::maximize}) {
      const double exact = fl::svd_oracle(M, mode).value;
      const double found = fl::extremal(M, 2.0, 2.0, mode, 32, 1000 + trial).value;
      CHECK(std::abs(found - exact) <= 1e-6 * std::max(sigma_max, 1e-12));
    }
  }
}

TEST_CASE("extremal scales linearly with the map") {
  for (int trial = 0; trial < 10; ++trial) {
    fl::Rng rng = fl::Rng::split(29, "extremal-scaling", trial);
    const auto base = random_matrix<double>(3, 3, rng);
    const double c = 3.0 * rng.uniform_symmetric();
    const auto space = fl::make_space<double>(3, 2.0);
    const auto M = fl::make_linear_map<double>(base, space, space);
    const auto cM = fl::make_linear_map<double>(c * base, space, space);
    for (const auto mode : {fl::ExtremalMode::minimize, fl::ExtremalMode::maximize}) {
      const double v = fl::extremal(M, 2.0, 2.0, mode, 16, 5).value;
      const double cv = fl::extremal(cM, 2.0, 2.0, mode, 16, 5).value;
      CHECK(cv == doctest::Approx(std::abs(c) * v).epsilon(1e-7));
    }
  }
}

TEST_CASE("more restarts never worsen the result") {
  fl::Rng rng = fl::Rng::split(31, "monotone", 0);
  const auto M = fl::make_linear_map<double>(random_matrix<double>(5, 5, rng), fl::make_space<double>(5, 1.5),
                                             fl::make_space<double>(5, 3.0));
  double prev_min = std::numeric_limits<double>::infinity();
  double prev_max = 0.0;
  for (int restarts : {1, 2, 4, 8, 16, 32}) {
    const double lo = fl::extremal(M, 1.5, 3.0, fl::ExtremalMode::minimize, restarts, 7).value;
    const double hi = fl::extremal(M, 1.5, 3.0, fl::ExtremalMode::maximize, restarts, 7).value;
    CHECK(lo <= prev_min + 1e-14);
    CHECK(hi >= prev_max - 1e-14);
    prev_min = lo;
    prev_max = hi;
  }
}

TEST_CASE("identical seeds reproduce identical results") {
  fl::Rng rng = fl::Rng::split(37, "determinism", 0);
  const auto M = fl::make_linear_map<double>(random_matrix<double>(4, 6, rng), fl::make_space<double>(6, 3.0),
                                             fl::make_space<double>(4, 1.5));
  const auto a = fl::extremal(M, 3.0, 1.5, fl::ExtremalMode::minimize, 12, 99);
  const auto b = fl::extremal(M, 3.0, 1.5, fl::ExtremalMode::minimize, 12, 99);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
}

TEST_CASE("witness feasibility at the corner exponents") {
  const double exps[] = {1.0, 2.0, fl::kInfExponent};
  for (int trial = 0; trial < 12; ++trial) {
    fl::Rng rng = fl::Rng::split(41, "corner-feasibility", trial);
    const fl::Index rows = 1 + static_cast<fl::Index>(rng.below(4));
    const fl::Index cols = 1 + static_cast<fl::Index>(rng.below(4));
    const double p = exps[rng.below(3)];
    const double r = exps[rng.below(3)];
    const auto M = fl::make_linear_map<double>(random_matrix<double>(rows, cols, rng),
                                               fl::make_space<double>(cols, p), fl::make_space<double>(rows, r));
    for (const auto mode : {fl::ExtremalMode::minimize, fl::ExtremalMode::maximize}) {
      const auto res = fl::extremal(M, p, r, mode, 8, trial);
      check_witness_feasible(M, res, p, r);
    }
  }
}

TEST_CASE("maximum over the l1 sphere is the best column norm") {
  // Convexity puts the maximum at a vertex, so the exact value is
  // max_i ||M e_i||_r; enumeration must recover it.
  for (int trial = 0; trial < 10; ++trial) {
    fl::Rng rng = fl::Rng::split(43, "l1-max", trial);
    const fl::Index rows = 2 + static_cast<fl::Index>(rng.below(3));
    const fl::Index cols = 2 + static_cast<fl::Index>(rng.below(5));
    const double r = (trial % 2 == 0) ? 2.0 : fl::kInfExponent;
    const auto entries = random_matrix<double>(rows, cols, rng);
    const auto M = fl::make_linear_map<double>(entries, fl::make_space<double>(cols, 1.0),
                                               fl::make_space<double>(rows, r));
    double best_column = 0.0;
    for (fl::Index j = 0; j < cols; ++j) {
      best_column = std::max(best_column, fl::norm_p<double>(fl::Vec<double>(entries.col(j)), r));
    }
    const auto res = fl::extremal(M, 1.0, r, fl::ExtremalMode::maximize, 4, trial);
    CHECK(res.value == doctest::Approx(best_column).epsilon(1e-9));
  }
}

TEST_CASE("maximum over the linf sphere matches sign enumeration") {
  for (int trial = 0; trial < 10; ++trial) {
    fl::Rng rng = fl::Rng::split(47, "linf-max", trial);
    const fl::Index rows = 2 + static_cast<fl::Index>(rng.below(3));
    const fl::Index cols = 2 + static_cast<fl::Index>(rng.below(3));  // <= 4 so vertices are enumerable
    const auto entries = random_matrix<double>(rows, cols, rng);
    const auto M = fl::make_linear_map<double>(entries, fl::make_space<double>(cols, fl::kInfExponent),
                                               fl::make_space<double>(rows, 2.0));
    double best = 0.0;
    for (long code = 0; code < (1L << cols); ++code) {
      fl::Vec<double> v(cols);
      for (fl::Index i = 0; i < cols; ++i) v[i] = (code >> i) & 1 ? 1.0 : -1.0;
      best = std::max(best, (entries * v).norm());
    }
    const auto res = fl::extremal(M, fl::kInfExponent, 2.0, fl::ExtremalMode::maximize, 4, trial);
    CHECK(res.value == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("minimum over the l1 sphere agrees with a boundary grid") {
  // Dense enumeration of the four edges of the planar l1 sphere is an
  // independent oracle for the nonconvex minimum.
  for (int trial = 0; trial < 5; ++trial) {
    fl::Rng rng = fl::Rng::split(53, "l1-min-grid", trial);
    const auto entries = random_matrix<double>(2, 2, rng);
    const auto M = fl::make_linear_map<double>(entries, fl::make_space<double>(2, 1.0),
                                               fl::make_space<double>(2, 2.0));
    double grid_min = std::numeric_limits<double>::infinity();
    const int steps = 20000;
    for (int k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      for (const double sx : {1.0, -1.0}) {
        for (const double sy : {1.0, -1.0}) {
          fl::Vec<double> v(2);
          v << sx * t, sy * (1.0 - t);
          grid_min = std::min(grid_min, (entries * v).norm());
        }
      }
    }
    const double sigma_max = fl::operator_norm2(M);
    const auto res = fl::extremal(M, 1.0, 2.0, fl::ExtremalMode::minimize, 16, trial);
    CHECK(std::abs(res.value - grid_min) <= 2e-3 * std::max(1.0, sigma_max));
  }
}

TEST_CASE("complex extremal matches the oracle at p = r = 2") {
  for (int trial = 0; trial < 8; ++trial) {
    fl::Rng rng = fl::Rng::split(59, "complex-oracle", trial);
    const fl::Index n = 2 + static_cast<fl::Index>(rng.below(3));
    const auto M = fl::make_linear_map<Complex>(random_matrix<Complex>(n, n, rng), fl::make_space<Complex>(n, 2.0),
                                                fl::make_space<Complex>(n, 2.0));
    for (const auto mode : {fl::ExtremalMode::minimize, fl::ExtremalMode::maximize}) {
      const double exact = fl::svd_oracle(M, mode).value;
      const double found = fl::extremal(M, 2.0, 2.0, mode, 24, trial).value;
      CHECK(std::abs(found - exact) <= 1e-6 * std::max(1.0, exact));
    }
  }
}

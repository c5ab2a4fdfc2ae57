// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.
// Usage: acceptance <path-to-cli> <fixtures-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "framelab/cross_frame.hpp"
#include "framelab/extremal.hpp"
#include "framelab/frame_file.hpp"
#include "framelab/frames.hpp"
#include "framelab/intertwine.hpp"
#include "framelab/linear_map.hpp"
#include "framelab/rng.hpp"
#include "framelab/spaces.hpp"

#include "test_support.hpp"

using Complex = std::complex<double>;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string cli_path;
std::string fixtures_dir;

std::map<std::string, fl::FrameFileData> load_fixtures() {
  std::map<std::string, fl::FrameFileData> files;
  for (const char* name : {"ortho2", "mercedes", "mercedes-canonical", "mercedes-unscaled", "rank1",
                           "duplicated-frame"}) {
    files[name] = fl::read_frame_file(fixtures_dir + "/" + name + ".json");
  }
  return files;
}

fl::CrossFramePair<double> pair_of(const fl::FrameFileData& file, double tol = fl::kDefaultResidualTol) {
  return fl::make_cross_frame_pair<double>(file.x.real(), file.y ? file.y->real() : file.x.real(), file.p, file.r,
                                           tol);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Certified pairs exercised by the operator-level criteria, keyed by name.
std::vector<std::pair<std::string, fl::CrossFramePair<double>>> certified_pool(
    const std::map<std::string, fl::FrameFileData>& fixtures) {
  std::vector<std::pair<std::string, fl::CrossFramePair<double>>> pool;
  pool.emplace_back("ortho2", pair_of(fixtures.at("ortho2")));
  pool.emplace_back("mercedes-canonical", pair_of(fixtures.at("mercedes-canonical")));
  const auto& duplicated = fixtures.at("duplicated-frame");
  pool.emplace_back("duplicated-canonical",
                    fl::make_cross_frame_pair<double>(duplicated.x.real(),
                                                      fl::Mat<double>(0.5 * duplicated.x.real()), 2.0, 2.0));
  return pool;
}

fl::LinearMap<double> random_invariant_map(const fl::KernelBasis<double>& kernel, const fl::NormedSpace& space,
                                           std::uint64_t seed) {
  fl::Rng rng = fl::Rng::split(seed, "acceptance-invariant", 0);
  fl::Mat<double> g = random_matrix<double>(space.dim, space.dim, rng);
  const fl::Mat<double> proj = fl::span_projector(kernel, space.dim);
  const fl::Mat<double> id = fl::Mat<double>::Identity(space.dim, space.dim);
  return fl::LinearMap<double>{g - (id - proj) * g * proj, space, space};
}

// -- criteria ---------------------------------------------------------------

Outcome criterion_hilbert_bounds(const std::map<std::string, fl::FrameFileData>& fixtures) {
  const auto family = fl::make_family<double>(fixtures.at("mercedes").x.real(), 2.0, 2.0, fl::FamilySide::frame);
  const auto [lo, hi] = fl::hilbert_frame_bounds(family);
  const double err = std::max(std::abs(lo - 1.5), std::abs(hi - 1.5));
  return {err <= 1e-9, "Mercedes (A,B)=(" + fmt(lo) + "," + fmt(hi) + "), err " + fmt(err) + " <= 1e-9"};
}

Outcome criterion_optimizer_vs_svd(const std::map<std::string, fl::FrameFileData>&) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    fl::Rng rng = fl::Rng::split(2024, "acceptance-maps", i);
    const fl::Index rows = 1 + static_cast<fl::Index>(rng.below(8));
    const fl::Index cols = 1 + static_cast<fl::Index>(rng.below(8));
    const auto M = fl::make_linear_map<double>(random_matrix<double>(rows, cols, rng),
                                               fl::make_space<double>(cols, 2.0), fl::make_space<double>(rows, 2.0));
    const double sigma_max = fl::svd_oracle(M, fl::ExtremalMode::maximize).value;
    for (const auto mode : {fl::ExtremalMode::minimize, fl::ExtremalMode::maximize}) {
      const double exact = fl::svd_oracle(M, mode).value;
      const double found = fl::extremal(M, 2.0, 2.0, mode, 64, 9000 + i).value;
      worst = std::max(worst, std::abs(found - exact) / std::max(sigma_max, 1e-12));
    }
  }
  return {worst <= 1e-6, "50 maps <= 8x8, both modes, worst relative gap " + fmt(worst) + " <= 1e-6"};
}

Outcome criterion_adjointness(const std::map<std::string, fl::FrameFileData>& fixtures) {
  double worst = 0.0;
  for (const auto& [name, file] : fixtures) {
    const auto bundle = fl::build_operators(pair_of(file));
    const double op_scale = bundle.synthesis.entries.norm();
    for (int s = 0; s < 1000; ++s) {
      fl::Rng rng = fl::Rng::split(31337, (name + "-eq5").c_str(), s);
      const auto a = random_vector<double>(file.n, rng);
      const auto y = random_vector<double>(file.m, rng);
      const double lhs = fl::pairing<double>(fl::apply(bundle.synthesis, a), y);
      const double rhs = fl::pairing<double>(a, fl::apply(bundle.dual_analysis, y));
      const double scale = 1.0 + a.norm() * y.norm() * op_scale;
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  return {worst <= 1e-12, "1000 samples per fixture, worst |(Sa,y)-(a,Ry)|/scale " + fmt(worst) + " <= 1e-12"};
}

std::vector<fl::CrossFramePair<double>> random_pairs() {
  std::vector<fl::CrossFramePair<double>> pairs;
  const double exps[][2] = {{2, 2}, {1.5, 3}, {1, 2}, {2, fl::kInfExponent}, {3, 1.5}};
  for (int i = 0; i < 20; ++i) {
    const fl::Index m = 2 + i % 4;
    const fl::Index n = m + 1 + i % 4;
    const auto& e = exps[i % 5];
    pairs.push_back(random_certified_pair<double>(m, n, 4000 + i, e[0], e[1]));
  }
  return pairs;
}

Outcome criterion_derived_reconstruction(const std::vector<fl::CrossFramePair<double>>& pairs) {
  double worst_primal = 0.0;
  double worst_dual = 0.0;
  for (const auto& pair : pairs) {
    const auto primal = fl::verify_reconstruction(pair);
    if (!primal.passed) return {false, "a generated pair failed (3) with residual " + fmt(primal.operator_residual)};
    worst_primal = std::max(worst_primal, primal.operator_residual);
    const auto dual = fl::derived_dual_reconstruction(pair);
    if (dual.identity != fl::ReconstructionIdentity::dual) return {false, "dual check did not run"};
    worst_dual = std::max(worst_dual, dual.operator_residual);
  }
  return {worst_primal <= 1e-10 && worst_dual <= 1e-9,
          "20 pairs: worst (3) residual " + fmt(worst_primal) + " <= 1e-10, worst (4) residual " + fmt(worst_dual) +
              " <= 1e-9"};
}

Outcome criterion_positive_bounds(const std::vector<fl::CrossFramePair<double>>& pairs) {
  double min_lower = std::numeric_limits<double>::infinity();
  int index = 0;
  for (const auto& pair : pairs) {
    const auto cert = fl::certify_cross_frame(pair, 24, 5000 + index++);
    if (!cert.certified) return {false, "pair " + std::to_string(index - 1) + " failed certification"};
    min_lower = std::min(min_lower, std::min(cert.frame_side->lower.value, cert.coframe_side->lower.value));
  }
  return {min_lower > 1e-6, "20 pairs certified; smallest lower bound " + fmt(min_lower) + " > 1e-6"};
}

Outcome criterion_equivalence(const std::map<std::string, fl::FrameFileData>& fixtures) {
  const auto pair = pair_of(fixtures.at("mercedes-canonical"));
  double worst_op = 0.0;
  for (const double c : {2.0, -1.0, 0.5}) {
    const auto u_cand = fl::make_family<double>(fl::Mat<double>(c * pair.coframe.vectors), 2.0, 2.0,
                                                fl::FamilySide::coframe);
    const auto u_res = fl::equivalence_operator_U(pair, u_cand);
    if (!u_res.equivalent) return {false, "U candidate scaled by " + fmt(c) + " not recognized"};
    worst_op = std::max(worst_op, (u_res.op.entries - c * fl::Mat<double>::Identity(2, 2)).cwiseAbs().maxCoeff());
    const fl::CrossFramePair<double> u_pair{*u_res.transformed, pair.frame, pair.tol};
    if (!fl::certify_cross_frame(u_pair, 16, 0).certified) return {false, "U-transformed family failed to re-certify"};

    const auto v_cand = fl::make_family<double>(fl::Mat<double>(c * pair.frame.vectors), 2.0, 2.0,
                                                fl::FamilySide::frame);
    const auto v_res = fl::equivalence_operator_V(pair, v_cand);
    if (!v_res.equivalent) return {false, "V candidate scaled by " + fmt(c) + " not recognized"};
    worst_op = std::max(worst_op, (v_res.op.entries - c * fl::Mat<double>::Identity(2, 2)).cwiseAbs().maxCoeff());
    const fl::CrossFramePair<double> v_pair{pair.coframe, *v_res.transformed, pair.tol};
    if (!fl::certify_cross_frame(v_pair, 16, 0).certified) return {false, "V-transformed family failed to re-certify"};
  }

  fl::Mat<double> collinear(3, 2);
  collinear << 1, 0, 2, 0, -1, 0;
  const auto rejected =
      fl::equivalence_operator_U(pair, fl::make_family<double>(collinear, 2.0, 2.0, fl::FamilySide::coframe));
  if (rejected.equivalent) return {false, "rank-deficient candidate was accepted"};
  return {worst_op <= 1e-10,
          "U,V = c I for c in {2,-1,0.5} within " + fmt(worst_op) + " <= 1e-10; re-certified; degenerate rejected"};
}

Outcome criterion_push_forward(const std::vector<std::pair<std::string, fl::CrossFramePair<double>>>& pool) {
  double worst_residual = 0.0;
  double worst_uniqueness = 0.0;
  bool violation_checked = false;
  for (const auto& [name, pair] : pool) {
    const auto bundle = fl::build_operators(pair);
    const auto kernel = fl::kernel_basis(bundle.synthesis);
    const auto& coeff = bundle.synthesis.domain;
    for (int i = 0; i < 20; ++i) {
      const auto a = random_invariant_map(kernel, coeff, 6000 + 100 * coeff.dim + i);
      const auto result = fl::push_forward_B(a, bundle);
      worst_residual = std::max(worst_residual, result.residual);
      worst_uniqueness = std::max(worst_uniqueness, result.uniqueness_residual);
    }
    if (!kernel.empty()) {
      fl::Rng rng = fl::Rng::split(6500, name.c_str(), 0);
      const fl::LinearMap<double> bad{random_matrix<double>(coeff.dim, coeff.dim, rng), coeff, coeff};
      if (fl::check_invariance(bad, kernel).invariant) return {false, name + ": violating draw was invariant"};
      bool rejected = false;
      try {
        fl::push_forward_B(bad, bundle);
      } catch (const fl::PreconditionError& e) {
        rejected = std::string(e.what()).find("kernel vector") != std::string::npos;
      }
      if (!rejected) return {false, name + ": N-violating operator was not rejected with a named kernel vector"};
      violation_checked = true;
    }
  }
  return {worst_residual <= 1e-10 && worst_uniqueness <= 1e-10 && violation_checked,
          "20 invariant maps per certified fixture: worst ||SA-BS|| " + fmt(worst_residual) +
              " <= 1e-10, uniqueness " + fmt(worst_uniqueness) + " <= 1e-10; violating maps rejected"};
}

Outcome criterion_lift(const std::vector<std::pair<std::string, fl::CrossFramePair<double>>>& pool) {
  double worst_residual = 0.0;
  double worst_range = 0.0;
  double worst_formula = 0.0;
  for (const auto& [name, pair] : pool) {
    const auto bundle = fl::build_operators(pair);
    const auto& ambient = bundle.synthesis.codomain;
    for (int i = 0; i < 20; ++i) {
      fl::Rng rng = fl::Rng::split(7000 + i, name.c_str(), 0);
      const fl::LinearMap<double> b{random_matrix<double>(ambient.dim, ambient.dim, rng), ambient, ambient};
      const auto lifted = fl::lift_A(b, bundle, fl::NullPartSpec<double>::random_in_kernel(), 7000 + i);
      worst_residual = std::max(worst_residual, lifted.residual);
      const auto report = fl::completeness_check(lifted.partner, b, bundle);
      worst_range = std::max(worst_range, report.range_residual);
      worst_formula = std::max(worst_formula, report.formula_residual);
    }
  }
  return {worst_residual <= 1e-10 && worst_range <= 1e-10 && worst_formula <= 1e-9,
          "20 (B, A0) draws per certified fixture: lift residual " + fmt(worst_residual) + " <= 1e-10, ||S A0|| " +
              fmt(worst_range) + " <= 1e-10, formula defect " + fmt(worst_formula) + " <= 1e-9"};
}

Outcome criterion_projectors(const std::vector<std::pair<std::string, fl::CrossFramePair<double>>>& pool) {
  double worst = 0.0;
  double mercedes_gap = -1.0;
  for (const auto& [name, pair] : pool) {
    const auto bundle = fl::build_operators(pair);
    const auto pq = fl::projector_pair(bundle.synthesis, bundle.analysis);
    const fl::Index dim = bundle.synthesis.domain.dim;
    const fl::Mat<double> id = fl::Mat<double>::Identity(dim, dim);
    worst = std::max(worst, (pq.P.entries + pq.Q.entries - id).cwiseAbs().maxCoeff());
    worst = std::max(worst, (pq.P.entries * pq.P.entries - pq.P.entries).cwiseAbs().maxCoeff());
    worst = std::max(worst, (bundle.synthesis.entries * pq.P.entries).cwiseAbs().maxCoeff());
    if (name == "mercedes-canonical") {
      mercedes_gap = (pq.P.entries - fl::Mat<double>::Constant(3, 3, 1.0 / 3.0)).cwiseAbs().maxCoeff();
    }
  }
  return {worst <= 1e-12 && mercedes_gap >= 0.0 && mercedes_gap <= 1e-12,
          "P+Q=I, P^2=P, SP=0 entrywise " + fmt(worst) + " <= 1e-12; Mercedes P vs ones/3 gap " +
              fmt(mercedes_gap) + " <= 1e-12"};
}

Outcome criterion_diagonal_group(const std::map<std::string, fl::FrameFileData>&) {
  Eigen::Vector3d lambdas(0.7, -1.3, 2.2);
  const auto report = fl::group_axioms_check(lambdas, {0.0, 0.5, 1.0, 2.0, M_PI}, 1e-12);
  const bool ok = report.passed && report.identity_residual == 0.0 && report.law_residual <= 1e-12 &&
                  report.isometry_residual <= 1e-12;
  return {ok, "T_0 exact, 5x5 group law " + fmt(report.law_residual) + " <= 1e-12, l^p isometry " +
                  fmt(report.isometry_residual) + " <= 1e-12 for p in {1,2,inf}"};
}

Outcome criterion_obstruction(const std::map<std::string, fl::FrameFileData>& fixtures) {
  const auto mercedes = pair_of(fixtures.at("mercedes"));
  const auto obstructed = fl::diagonal_group_obstruction(mercedes, Eigen::Vector3d(0, 1, 2), 0.5);
  if (obstructed.verdict != fl::GroupVerdict::obstructed) return {false, "Mercedes was not obstructed"};
  const double residual = obstructed.evidence->max_residual;
  if (!(residual > 1e-6)) return {false, "off-kernel residual vanished"};

  const auto ortho = pair_of(fixtures.at("ortho2"));
  if (fl::diagonal_group_obstruction(ortho, Eigen::Vector2d(0, 1), 0.5).verdict != fl::GroupVerdict::group_exists) {
    return {false, "orthonormal fixture did not admit the group"};
  }

  bool rejected = false;
  try {
    fl::diagonal_group_obstruction(mercedes, Eigen::Vector3d(0, 0, 1), 0.5);
  } catch (const fl::PreconditionError&) {
    rejected = true;
  }
  return {rejected, "Mercedes obstructed with off-kernel residual " + fmt(residual) +
                        "; ortho2 admits the group; non-separated lambdas rejected"};
}

std::string run_capture(const std::string& args, int& exit_code, int id) {
  const std::string out_path = "acceptance_out_" + std::to_string(id) + ".txt";
  const std::string cmd = cli_path + " " + args + " > " + out_path + " 2> acceptance_err.txt";
  const int raw = std::system(cmd.c_str());
  exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(out_path.c_str());
  return buf.str();
}

Outcome criterion_cli_determinism(const std::map<std::string, fl::FrameFileData>& fixtures) {
  int id = 0;
  for (const auto& [name, file] : fixtures) {
    const std::string base = fixtures_dir + "/" + name + ".json --format machine --seed 0 --restarts 16";
    for (const char* cmd : {"verify", "bounds"}) {
      int code_a = 0;
      int code_b = 0;
      const std::string a = run_capture(std::string(cmd) + " " + base, code_a, ++id);
      const std::string b = run_capture(std::string(cmd) + " " + base, code_b, ++id);
      if (code_a != code_b) return {false, name + ": exit codes differ across runs"};
      if (a != b) return {false, name + ": " + cmd + " reports differ across runs"};
      if (code_a == 0 && a.empty()) return {false, name + ": empty report"};
    }
  }
  return {true, "verify and bounds machine reports byte-identical across two seeded runs on all 6 fixtures"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " <path-to-cli> <fixtures-dir>\n";
    return 64;
  }
  cli_path = argv[1];
  fixtures_dir = argv[2];

  const auto started = std::chrono::steady_clock::now();
  const auto fixtures = load_fixtures();
  const auto pool = certified_pool(fixtures);
  const auto pairs = random_pairs();

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Hilbert frame bounds of the Mercedes fixture", [&] { return criterion_hilbert_bounds(fixtures); }},
      {"optimizer agrees with the SVD oracle", [&] { return criterion_optimizer_vs_svd(fixtures); }},
      {"synthesis/analysis adjointness identity", [&] { return criterion_adjointness(fixtures); }},
      {"derived dual reconstruction on certified pairs", [&] { return criterion_derived_reconstruction(pairs); }},
      {"positive lower bounds on certified pairs", [&] { return criterion_positive_bounds(pairs); }},
      {"equivalence operators U and V", [&] { return criterion_equivalence(fixtures); }},
      {"push-forward intertwining partner", [&] { return criterion_push_forward(pool); }},
      {"lift decomposition and completeness", [&] { return criterion_lift(pool); }},
      {"oblique projector identities", [&] { return criterion_projectors(pool); }},
      {"diagonal group axioms", [&] { return criterion_diagonal_group(fixtures); }},
      {"diagonal group obstruction", [&] { return criterion_obstruction(fixtures); }},
      {"CLI machine-report determinism", [&] { return criterion_cli_determinism(fixtures); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failures;
    std::printf("%s %2zu  %s — %s\n", outcome.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str());
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
              seconds);
  return failures;
}

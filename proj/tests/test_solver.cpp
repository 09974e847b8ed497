#include <doctest.h>

#include <cmath>

#include "antex/metrics.hpp"
#include "antex/models.hpp"
#include "antex/sampling.hpp"
#include "antex/solver.hpp"

using namespace antex;

namespace {

Eigen::MatrixXcd random_matrix(Prng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

Eigen::VectorXcd random_vector(Prng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v;
}

Eigen::VectorXcd random_unit(Prng& rng, int n) {
  Eigen::VectorXcd v = random_vector(rng, n);
  return v / v.norm();
}

void check_kkt(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& p) {
  const LsSolution sol = solve_excitation(m, p, ExcitationConstraint::UnitNorm);
  CHECK(std::fabs(sol.excitation.norm() - 1.0) <= 1e-9);
  const Eigen::VectorXcd g = m.adjoint() * p;
  const Eigen::VectorXcd grad = m.adjoint() * (m * sol.excitation) - g;
  const double lambda = (sol.excitation.adjoint() * grad)(0).real();
  const double stationarity = (grad - lambda * sol.excitation).norm();
  CHECK(stationarity <= 1e-8 * std::max(g.norm(), 1e-30));
}

}  // namespace

TEST_CASE("unit-norm fit of the 2x2 identity") {
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::VectorXcd p(2);
  p << Complex{2, 0}, Complex{0, 0};
  const LsSolution sol = solve_excitation(m, p, ExcitationConstraint::UnitNorm);
  CHECK(std::abs(sol.excitation[0] - Complex{1, 0}) <= 1e-12);
  CHECK(std::abs(sol.excitation[1]) <= 1e-12);
  CHECK(sol.lambda == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.residual == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unconstrained fit with orthonormal columns is the projection") {
  Prng rng(3);
  const Eigen::MatrixXcd raw = random_matrix(rng, 12, 4);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
  const Eigen::MatrixXcd q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(12, 4);
  const Eigen::VectorXcd p = random_vector(rng, 12);
  const LsSolution sol =
      solve_excitation(q, p, ExcitationConstraint::Unconstrained);
  CHECK((sol.excitation - q.adjoint() * p).norm() <= 1e-10);
}

TEST_CASE("p = 0 returns the least right-singular vector") {
  Prng rng(5);
  const Eigen::MatrixXcd m = random_matrix(rng, 9, 4);
  const Eigen::VectorXcd p = Eigen::VectorXcd::Zero(9);
  const LsSolution sol = solve_excitation(m, p, ExcitationConstraint::UnitNorm);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const double sigma_min = svd.singularValues()(3);
  CHECK(std::fabs(sol.residual - sigma_min) <= 1e-10);
  // excitation matches the singular vector up to phase
  const Complex overlap = (svd.matrixV().col(3).adjoint() * sol.excitation)(0);
  CHECK(std::fabs(std::abs(overlap) - 1.0) <= 1e-9);
}

TEST_CASE("all-zero matrix under the unit-norm constraint") {
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(5, 3);
  Eigen::VectorXcd p(5);
  p << 1, 2, 3, 4, Complex{0, 5};
  const LsSolution sol = solve_excitation(m, p, ExcitationConstraint::UnitNorm);
  CHECK(std::fabs(sol.excitation.norm() - 1.0) <= 1e-12);
  CHECK(sol.residual == doctest::Approx(p.norm()).epsilon(1e-12));
}

TEST_CASE("unit-norm KKT certificate on random systems") {
  Prng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 20);
    const int cols = 1 + static_cast<int>(rng.uniform() * 8);
    check_kkt(random_matrix(rng, rows, cols), random_vector(rng, rows));
  }
  // rank-deficient systems (duplicated columns)
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXcd m = random_matrix(rng, 10, 4);
    m.col(3) = m.col(1);
    check_kkt(m, random_vector(rng, 10));
  }
  // wide systems (more unknowns than equations)
  for (int trial = 0; trial < 50; ++trial) {
    check_kkt(random_matrix(rng, 3, 7), random_vector(rng, 3));
  }
}

TEST_CASE("unit-norm objective beats random unit vectors") {
  Prng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd m = random_matrix(rng, 6, 3);
    const Eigen::VectorXcd p = random_vector(rng, 6);
    const LsSolution sol = solve_excitation(m, p, ExcitationConstraint::UnitNorm);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10000; ++i)
      best = std::min(best, (m * random_unit(rng, 3) - p).norm());
    CHECK(sol.residual <= best + 1e-12);
  }
}

TEST_CASE("unconstrained fit is scale equivariant") {
  Prng rng(13);
  const Eigen::MatrixXcd m = random_matrix(rng, 10, 4);
  const Eigen::VectorXcd p = random_vector(rng, 10);
  const Complex c{-1.7, 2.4};
  const LsSolution base = solve_excitation(m, p, ExcitationConstraint::Unconstrained);
  const LsSolution scaled =
      solve_excitation(m, (c * p).eval(), ExcitationConstraint::Unconstrained);
  CHECK((scaled.excitation - c * base.excitation).norm() <=
        1e-10 * base.excitation.norm());
  CHECK(scaled.residual == doctest::Approx(std::abs(c) * base.residual)
                               .epsilon(1e-9));
}

TEST_CASE("solve_excitation rejects bad shapes") {
  CHECK_THROWS_AS(solve_excitation(Eigen::MatrixXcd(3, 0),
                                   Eigen::VectorXcd::Zero(3),
                                   ExcitationConstraint::UnitNorm),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_excitation(Eigen::MatrixXcd::Identity(3, 2),
                                   Eigen::VectorXcd::Zero(4),
                                   ExcitationConstraint::UnitNorm),
                  std::invalid_argument);
}

TEST_CASE("candidate grids") {
  Eigen::VectorXd center(1), spacing(1);
  center << 0.0;
  spacing << 1.0;
  const std::vector<Bounds> b1{{-5.0, 5.0}};
  auto g = candidate_grid(center, spacing, GridScheme::Factorial3, b1);
  REQUIRE(g.size() == 3);
  CHECK(g[0][0] == -1.0);
  CHECK(g[1][0] == 0.0);
  CHECK(g[2][0] == 1.0);

  Eigen::VectorXd c2(2), s2(2);
  c2 << 0.5, 0.5;
  s2 << 0.1, 0.1;
  const std::vector<Bounds> b2{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(candidate_grid(c2, s2, GridScheme::Compass, b2).size() == 5);
  CHECK(candidate_grid(c2, s2, GridScheme::Factorial3, b2).size() == 9);

  // center on a bound: clipped duplicates collapse, center stays
  Eigen::VectorXd c3(1);
  c3 << 0.0;
  const std::vector<Bounds> b3{{0.0, 1.0}};
  g = candidate_grid(c3, spacing, GridScheme::Factorial3, b3);
  REQUIRE(g.size() == 2);
  CHECK(g[0][0] == 0.0);
  CHECK(g[1][0] == 1.0);
}

TEST_CASE("design matrix columns reproduce the forward map") {
  const auto rect1 = make_rect_array_model(1, 1);
  const auto pts = to_far_field(std::vector{Direction(0.3, 0.1), Direction(-1, 0.4)});
  const auto m1 = design_matrix(rect1, Eigen::VectorXd(), pts);
  CHECK(m1.rows() == 2);
  CHECK(m1.cols() == 1);
  CHECK(m1(0, 0) == Complex{1, 0});
  CHECK(m1(1, 0) == Complex{1, 0});

  // hand-checked near-field cells
  const auto gen = make_general_array_model(2, 0.5);
  Eigen::VectorXd x(6);
  x << 0, 0, 0, 0, 0, 0.25;
  const std::vector<SamplePoint> npts{SamplePoint::near_field({0, 0, 100}),
                                      SamplePoint::near_field({3, 4, 0}),
                                      SamplePoint::near_field({0, 100.25, 0})};
  const auto m2 = design_matrix(gen, x, npts);
  CHECK(std::abs(m2(0, 1) - Complex{0, -1}) <= 1e-12);  // 99.75 wavelengths
  CHECK(std::abs(m2(1, 0) - Complex{1, 0}) <= 1e-12);   // distance 5 exactly

  // M * a equals the forward pattern
  Prng rng(17);
  Eigen::VectorXcd a(2);
  a << rng.complex_normal(), rng.complex_normal();
  GeneralArrayConfig cfg{{{0, 0, 0}, {0, 0, 0.25}}};
  const auto direct = array_nearfield_pattern(cfg, a, npts);
  CHECK((m2 * a - direct).norm() <= 1e-12 * direct.norm());
}

TEST_CASE("zero-iteration extrapolation reports the initial design") {
  const auto model = make_rect_array_model(2, 2);
  Prng rng(19);
  const auto dirs = generate_samples(SamplingSpec::random_sphere(30), 19);
  const auto pts = to_far_field(dirs);
  Eigen::VectorXd truth(2);
  truth << 0.2, 0.4;
  const Eigen::VectorXcd a = random_unit(rng, 4);
  SampledPattern obs{pts, evaluate_pattern(model, truth, a, pts),
                     MeasurementKind::ComplexField};
  SolverParams params;
  params.max_iterations = 0;
  params.restarts = 2;
  const auto res = extrapolate(model, obs, {}, params, 1);
  CHECK(res.residual_history.size() == 1);
  CHECK(res.iterations_used == 0);
}

TEST_CASE("residual history is non-increasing") {
  const auto model = make_rect_array_model(2, 3);
  Prng rng(23);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto dirs =
        generate_samples(SamplingSpec::random_sphere(40), 100 + seed);
    const auto pts = to_far_field(dirs);
    const Eigen::VectorXd truth = uniform_config(model, rng);
    const Eigen::VectorXcd a = random_unit(rng, 6);
    Eigen::VectorXcd field = evaluate_pattern(model, truth, a, pts);
    field = add_noise(field, seed % 2 ? 0.05 : 0.0, seed);
    for (const auto kind :
         {MeasurementKind::ComplexField, MeasurementKind::MagnitudeLinear}) {
      SampledPattern obs{pts, measure(field, kind), kind};
      SolverParams params;
      params.max_iterations = 6;
      params.restarts = 2;
      const auto res = extrapolate(model, obs, {}, params, seed);
      for (std::size_t i = 1; i < res.residual_history.size(); ++i)
        CHECK(res.residual_history[i] <= res.residual_history[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("extrapolation is deterministic") {
  const auto model = make_horn_model();
  const auto dirs = generate_samples(SamplingSpec::random_sphere(50), 31);
  const auto pts = to_far_field(dirs);
  Eigen::VectorXd truth(3);
  truth << 2.0, 1.5, 3.0;
  Eigen::VectorXcd a(1);
  a << std::polar(1.0, 0.7);
  SampledPattern obs{pts, evaluate_pattern(model, truth, a, pts),
                     MeasurementKind::ComplexField};
  SolverParams params;
  params.max_iterations = 4;
  params.restarts = 2;
  const auto r1 = extrapolate(model, obs, pts, params, 77);
  const auto r2 = extrapolate(model, obs, pts, params, 77);
  CHECK((r1.config.array() == r2.config.array()).all());
  CHECK(r1.residual_history == r2.residual_history);
  CHECK((r1.predicted.array() == r2.predicted.array()).all());
}

TEST_CASE("exact recovery on a 3x3 array from random sampling") {
  const auto model = make_rect_array_model(3, 3);
  const auto [laz, lel] = full_sphere_lattice(5.0);
  int good = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Prng rng(mix_seed(1000, static_cast<std::uint64_t>(trial)));
    const Eigen::VectorXd truth = uniform_config(model, rng);
    const Eigen::VectorXcd a = random_unit(rng, 9);
    const auto dirs = generate_samples(SamplingSpec::random_sphere(200),
                                       mix_seed(2000, trial));
    const auto pts = to_far_field(dirs);
    SampledPattern obs{pts, evaluate_pattern(model, truth, a, pts),
                       MeasurementKind::ComplexField};
    SolverParams params;
    params.max_iterations = 25;
    params.restarts = 4;
    params.convergence_tol = 0.0;  // run the full schedule
    const auto res =
        extrapolate(model, obs, {}, params, mix_seed(3000, trial));
    const bool residual_ok =
        res.residual_history.back() <= 1e-3 * obs.values.norm();

    const auto dense_pred =
        evaluate_dense(model, res.config, res.excitation, laz, lel,
                       MeasurementKind::ComplexField);
    const auto dense_truth = evaluate_dense(model, truth, a, laz, lel,
                                            MeasurementKind::ComplexField);
    const double rel_rms =
        total_error(dense_pred, dense_truth) /
        std::sqrt(dense_truth.values.squaredNorm() /
                  static_cast<double>(dense_truth.values.size()));
    if (residual_ok && rel_rms <= 1e-2) ++good;
  }
  CHECK(good >= 16);  // at least 80% of seeded trials
}

TEST_CASE("planar sampling leaves the mirror ambiguity unresolved") {
  // one radiator above the xy-plane, observed on a circle inside the plane
  const auto model = make_general_array_model(1, 0.5);
  Eigen::VectorXd truth(3);
  truth << 0.1, -0.2, 0.3;
  Eigen::VectorXcd a(1);
  a << std::polar(1.0, 0.7);

  std::vector<SamplePoint> ring;
  for (int i = 0; i < 32; ++i) {
    const double t = kTwoPi * i / 32;
    ring.push_back(
        SamplePoint::near_field({10 * std::cos(t), 10 * std::sin(t), 0.0}));
  }
  SampledPattern obs{ring, evaluate_pattern(model, truth, a, ring),
                     MeasurementKind::ComplexField};

  SolverParams params;
  params.max_iterations = 30;
  params.restarts = 8;
  const auto res = extrapolate(model, obs, {}, params, 5);
  CHECK(res.residual_history.back() <= 1e-2 * obs.values.norm());
  // the recovered height matches up to the sign ambiguity
  CHECK(std::fabs(std::fabs(res.config[2]) - 0.3) <= 0.05);

  // off-plane predictions follow whichever branch was found and stay far
  // from the mirrored one
  Eigen::VectorXd mirrored = truth;
  mirrored[2] = -truth[2];
  std::vector<SamplePoint> off;
  for (int i = 0; i < 16; ++i) {
    const double t = kTwoPi * i / 16;
    off.push_back(
        SamplePoint::near_field({8 * std::cos(t), 8 * std::sin(t), 6.0}));
  }
  const Eigen::VectorXcd pred =
      evaluate_pattern(model, res.config, res.excitation, off);
  const Eigen::VectorXcd up = evaluate_pattern(model, truth, a, off);
  const Eigen::VectorXcd dn = evaluate_pattern(model, mirrored, a, off);
  const double diff_up = (pred - up).norm();
  const double diff_dn = (pred - dn).norm();
  CHECK((up - dn).norm() > 0.5 * up.norm());  // branches truly differ off-plane
  CHECK(std::min(diff_up, diff_dn) <= 0.2 * up.norm());
}

TEST_CASE("residual_error agrees with its definitions") {
  const auto model = make_rect_array_model(2, 2);
  Prng rng(37);
  const Eigen::VectorXd truth = uniform_config(model, rng);
  const Eigen::VectorXcd a = random_unit(rng, 4);
  const auto dirs = generate_samples(SamplingSpec::random_sphere(25), 37);
  const auto pts = to_far_field(dirs);
  SampledPattern obs{pts, evaluate_pattern(model, truth, a, pts),
                     MeasurementKind::ComplexField};

  CHECK(residual_error(model, truth, a, obs) <= 1e-10 * obs.values.norm());
  CHECK(residual_error(model, truth, Eigen::VectorXcd::Zero(4), obs) ==
        doctest::Approx(obs.values.norm()));

  const auto m = design_matrix(model, truth, pts);
  const auto sol = solve_excitation(m, obs.values, ExcitationConstraint::UnitNorm);
  CHECK(std::fabs(residual_error(model, truth, sol.excitation, obs) -
                  sol.residual) <= 1e-12);
}

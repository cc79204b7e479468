#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mbq/dynamics.hpp>
#include <random>

using namespace mbq;

namespace {

QubitParams direct_params(double E1, double E2, double l1, double l2, double l12,
                          cplx kappa = 0.0, double kappa_prime = 0.0) {
  QubitParams p;
  p.E = {E1, E2};
  p.lambda = {l1, l2};
  p.lambda12 = l12;
  p.kappa = kappa;
  p.kappa_prime = kappa_prime;
  return p;
}

// restriction to the two pair states, lower state first
FockSpace pair_space(long n1, long n2) {
  return FockSpace::from_states(2, {{(int)n1, (int)n2}, {(int)(n1 + 1), (int)(n2 - 1)}});
}

}  // namespace

TEST_CASE("two-level reduction") {
  SUBCASE("resonant pair") {
    QubitParams p = direct_params(0.0, 0.0, 0.0, 0.0, 0.0, cplx(0.1, 0.0));
    TwoLevelModel tl = two_level(p, {0, 1});
    CHECK(tl.g == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(tl.delta == doctest::Approx(0.0));
    CHECK(tl.omega == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(tl.max_transfer == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tl.t_first_max == doctest::Approx(M_PI / 0.2).epsilon(1e-14));
    CHECK(tl.transfer_probability(tl.t_first_max) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("strong detuning caps the transfer at 1/101") {
    QubitParams p = direct_params(2.0, 0.0, 0.0, 0.0, 0.0, cplx(0.1, 0.0));
    TwoLevelModel tl = two_level(p, {0, 1});
    CHECK(tl.delta == doctest::Approx(2.0).epsilon(1e-14));  // 20 g
    CHECK(tl.max_transfer == doctest::Approx(1.0 / 101.0).epsilon(1e-13));
  }
  SUBCASE("anharmonic detuning of an off-minimum pair") {
    QubitParams p = direct_params(0.0, 0.0, 1.0, 1.0, 2.0, cplx(0.1, 0.0));
    TwoLevelModel tl = two_level(p, {1, 3});
    // diagonal energies 4 and 0: upper minus lower = -4
    CHECK(tl.delta == doctest::Approx(-4.0).epsilon(1e-14));
  }
  SUBCASE("pair validation") {
    QubitParams p = direct_params(0.0, 0.0, 0.0, 0.0, 0.0, cplx(0.1, 0.0));
    CHECK_THROWS_AS((void)two_level(p, {2, 0}), std::invalid_argument);
  }
}

TEST_CASE("resonant transfer follows cosine and sine amplitudes") {
  const double g = 0.25;
  QubitParams p = direct_params(0.0, 0.0, 0.0, 0.0, 0.0, cplx(g, 0.0));
  FockSpace sp = pair_space(0, 1);
  Eigen::MatrixXcd h = build_fock_matrix(qubit_terms(p), sp);
  long lower = state_index(sp, 0, 1), upper = state_index(sp, 1, 0);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
  psi0(lower) = 1.0;

  for (Propagator method : {Propagator::spectral, Propagator::krylov}) {
    PropagateOptions opt;
    opt.t_end = 3.0 * M_PI / g;
    opt.n_samples = 64;
    opt.method = method;
    Trajectory traj = propagate(h, psi0, opt);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      cplx alpha = traj.states(lower, (Eigen::Index)i);
      cplx beta = traj.states(upper, (Eigen::Index)i);
      CHECK(std::abs(alpha - std::cos(g * t)) < 1e-9);
      CHECK(std::abs(beta - cplx(0.0, -std::sin(g * t))) < 1e-9);
    }
    CHECK(traj.norm_drift < 1e-10);
    CHECK(traj.energy_drift < 1e-10);
  }
}

TEST_CASE("krylov evolution matches the spectral propagator") {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = 40;
  Eigen::MatrixXcd r(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::MatrixXcd h = 0.5 * (r + r.adjoint());
  Eigen::VectorXcd psi0(dim);
  for (int i = 0; i < dim; ++i) psi0(i) = cplx(gauss(rng), gauss(rng));
  psi0.normalize();

  PropagateOptions opt;
  opt.t_end = 2.0;
  opt.n_samples = 16;
  opt.method = Propagator::spectral;
  Trajectory a = propagate(h, psi0, opt);
  opt.method = Propagator::krylov;
  Trajectory b = propagate(h, psi0, opt);
  for (int i = 0; i <= opt.n_samples; ++i)
    CHECK((a.states.col(i) - b.states.col(i)).norm() < 1e-9);
  CHECK(a.norm_drift < 1e-12);
  CHECK(b.norm_drift < 1e-9);
  CHECK(a.energy_drift < 1e-12);
  CHECK(b.energy_drift < 1e-9);
}

TEST_CASE("propagation input validation") {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 1) = 1.0;  // not Hermitian
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2);
  psi(0) = 1.0;
  PropagateOptions opt;
  CHECK_THROWS_AS((void)propagate(h, psi, opt), std::invalid_argument);
  Eigen::MatrixXcd ok = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS((void)propagate(ok, Eigen::VectorXcd::Zero(2), opt), std::invalid_argument);
  CHECK_THROWS_AS((void)propagate(ok, Eigen::VectorXcd::Ones(3), opt), std::invalid_argument);
  opt.t_end = -1.0;
  CHECK_THROWS_AS((void)propagate(ok, psi, opt), std::invalid_argument);
  opt.t_end = 1.0;
  opt.n_samples = 0;
  CHECK_THROWS_AS((void)propagate(ok, psi, opt), std::invalid_argument);
}

TEST_CASE("spectral bound is the max absolute row sum") {
  Eigen::MatrixXcd h(2, 2);
  h << cplx(1.0, 0.0), cplx(0.0, 2.0), cplx(0.0, -2.0), cplx(-1.0, 0.0);
  CHECK(spectral_bound(h) == doctest::Approx(3.0));
}

TEST_CASE("rabi measurement recovers the analytic frequency") {
  const double g = 0.2;
  SUBCASE("resonant") {
    QubitParams p = direct_params(0.0, 0.0, 0.0, 0.0, 0.0, cplx(g, 0.0));
    FockSpace sp = pair_space(0, 1);
    Eigen::MatrixXcd h = build_fock_matrix(qubit_terms(p), sp);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
    psi0(state_index(sp, 0, 1)) = 1.0;
    RabiMeasurement rm =
        measure_rabi(h, psi0, state_index(sp, 1, 0), 1.5 * M_PI / g, 4096);
    REQUIRE(rm.found);
    CHECK(std::abs(rm.omega - 2.0 * g) <= 1e-8 * 2.0 * g);
    CHECK(rm.peak_population == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("detuned") {
    QubitParams p = direct_params(2.0, 0.0, 0.0, 0.0, 0.0, cplx(0.1, 0.0));
    TwoLevelModel tl = two_level(p, {0, 1});
    FockSpace sp = pair_space(0, 1);
    Eigen::MatrixXcd h = build_fock_matrix(qubit_terms(p), sp);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
    psi0(state_index(sp, 0, 1)) = 1.0;
    RabiMeasurement rm =
        measure_rabi(h, psi0, state_index(sp, 1, 0), 1.5 * M_PI / tl.omega, 8192);
    REQUIRE(rm.found);
    CHECK(std::abs(rm.omega - tl.omega) <= 1e-6 * tl.omega);
    CHECK(std::abs(rm.peak_population - 1.0 / 101.0) <= 1e-8);
  }
  SUBCASE("flat population reports no oscillation") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
    psi0(0) = 1.0;
    RabiMeasurement rm = measure_rabi(h, psi0, 1, 10.0, 512);
    CHECK(!rm.found);
  }
}

TEST_CASE("leakage bookkeeping on a three-state shell") {
  FockSpace sp = FockSpace::build({2, 2}, 2);  // (0,2), (1,1), (2,0)
  REQUIRE(sp.dim() == 3);
  QubitPair pair{0, 2};
  Trajectory traj;
  traj.times = {0.0, 1.0};
  traj.states = Eigen::MatrixXcd::Zero(3, 2);
  traj.states(state_index(sp, 0, 2), 0) = 1.0;                       // inside the pair
  traj.states(state_index(sp, 2, 0), 1) = cplx(0.0, 1.0);            // fully outside
  traj.norm = {1.0, 1.0};
  std::vector<double> leak = leakage_series(traj, sp, pair);
  REQUIRE(leak.size() == 2);
  CHECK(leak[0] == doctest::Approx(0.0));
  CHECK(leak[1] == doctest::Approx(1.0));
  LeakageSummary s = summarize_leakage(leak);
  CHECK(s.max_leakage == doctest::Approx(1.0));
  CHECK(s.final_leakage == doctest::Approx(1.0));
  CHECK(summarize_leakage({}).max_leakage == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)state_index(FockSpace::build({1, 1, 1}, 1), 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)leakage_series(traj, sp, QubitPair{5, 7}), std::invalid_argument);
}

TEST_CASE("anharmonicity confines the transfer to the working pair") {
  // protected: lambda n_t = 6 against g ~ 0.17; free: same hopping, no nonlinearity
  const double kappa = 0.05;
  QubitParams prot = direct_params(0.0, 4.0, 1.0, 1.0, 2.0, cplx(kappa, 0.0));
  QubitPair pair = select_qubit_pair(prot, 6);
  CHECK(pair.n1 == 3);
  CHECK(pair.n2 == 3);
  TwoLevelModel tl = two_level(prot, pair);
  CHECK(tl.delta == doctest::Approx(0.0));  // offset 1 makes the pair degenerate
  REQUIRE(1.0 * 6.0 >= 10.0 * tl.g);

  FockSpace sp = FockSpace::build({6, 6}, 6);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero((Eigen::Index)sp.dim());
  psi0(state_index(sp, pair.n1, pair.n2)) = 1.0;
  PropagateOptions opt;
  opt.t_end = 2.0 * M_PI / tl.omega;  // one full population cycle
  opt.n_samples = 400;

  Eigen::MatrixXcd h = build_fock_matrix(qubit_terms(prot), sp);
  LeakageSummary s = summarize_leakage(leakage_series(propagate(h, psi0, opt), sp, pair));
  CHECK(s.max_leakage < 0.05);

  QubitParams free_p = direct_params(0.0, 0.0, 0.0, 0.0, 0.0, cplx(kappa, 0.0));
  Eigen::MatrixXcd hf = build_fock_matrix(qubit_terms(free_p), sp);
  LeakageSummary sf = summarize_leakage(leakage_series(propagate(hf, psi0, opt), sp, pair));
  CHECK(sf.max_leakage > 0.5);
}

TEST_CASE("transfer amplitude scales as sqrt((n1+1) n2)") {
  QubitParams p = direct_params(0.0, 0.0, 0.0, 0.0, 0.0, cplx(0.12, 0.0));
  std::vector<QubitPair> occ{{0, 9}, {0, 1}, {0, 4}};
  std::vector<ScalingPoint> pts = scaling_study(p, occ);
  REQUIRE(pts.size() == 3);
  // sorted by total occupation
  CHECK(pts[0].n2 == 1);
  CHECK(pts[1].n2 == 4);
  CHECK(pts[2].n2 == 9);
  for (const ScalingPoint& pt : pts) {
    REQUIRE(pt.found);
    CHECK(std::abs(pt.g_measured - pt.g_predicted) <= 1e-6 * pt.g_predicted);
  }
  CHECK(pts[1].g_predicted == doctest::Approx(2.0 * pts[0].g_predicted).epsilon(1e-12));
  CHECK(pts[2].g_predicted == doctest::Approx(3.0 * pts[0].g_predicted).epsilon(1e-12));

  CHECK_THROWS_AS((void)scaling_study(p, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS((void)scaling_study(p, {{-1, 2}}), std::invalid_argument);

  // with no coupling at all the study reports unmeasurable points
  QubitParams z = direct_params(0.0, 0.0, 0.0, 0.0, 0.0);
  std::vector<ScalingPoint> zp = scaling_study(z, {{0, 1}});
  REQUIRE(zp.size() == 1);
  CHECK(!zp[0].found);
  CHECK(zp[0].g_predicted == doctest::Approx(0.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mbq/qubit.hpp>
#include <random>

using namespace mbq;

namespace {

// identical samples with chosen channel sums at k = 0 and at the condensate k
CondensateSums manual_sums(int n, double S, double h, double J0, double Dt0, double Dzz0,
                           double Jk, double Dtk, double cross_L00 = 0.0,
                           double cross_T00 = 0.0, cplx cross_T = 0.0) {
  CondensateSums s;
  s.n = n;
  s.spin = {S, S};
  s.field = {h, h};
  s.J0 = {J0, J0};
  s.Dt0 = {Dt0, Dt0};
  s.Dzz0 = {Dzz0, Dzz0};
  s.Jk = {Jk, Jk};
  s.Dtk = {Dtk, Dtk};
  s.cross_L00 = cross_L00;
  s.cross_T00 = cross_T00;
  s.cross_T = cross_T;
  return s;
}

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

LatticeSpec ring(int n, double S, double h) {
  return make_lattice({n, 1, 1}, 1.0, 1.0, S, S, h, h);
}

}  // namespace

TEST_CASE("anharmonicity from the transverse/longitudinal mismatch") {
  // Dt(0) = 2, Dzz(0) = 1, N = 10 -> lambda = (2 - 1)/20 = 0.05
  CondensateSums s = manual_sums(10, 0.5, 0.0, 2.0, 2.0, 1.0, 2.0, 2.0);
  QubitParams p = params_from_condensate_sums(s);
  CHECK(p.lambda[0] == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(p.lambda[1] == doctest::Approx(0.05).epsilon(1e-14));
  // E = (S + 1/(2N)) (L0 - Tk) + S h with drop = -1
  CHECK(p.E[0] == doctest::Approx(-(0.5 + 0.05)).epsilon(1e-14));
}

TEST_CASE("isotropic exchange gives a harmonic pair") {
  LatticeSpec lat = ring(5, 0.5, 0.3);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  m.cross = ExchangeModel::uniform;
  m.J12 = 0.3;
  CouplingTable t = build_couplings(lat, m);
  FourierTable tf = build_fourier_table(t, lat);
  QubitParams p = basic_params(tf, lat);
  CHECK(p.lambda[0] == doctest::Approx(0.0));
  CHECK(p.lambda[1] == doctest::Approx(0.0));
  CHECK(p.E[0] == doctest::Approx(0.5 * 0.3).epsilon(1e-13));   // S h only
  CHECK(p.lambda12 == doctest::Approx(0.3).epsilon(1e-13));     // n J12 / n
  CHECK(p.kappa_prime == doctest::Approx(5.0 * 0.3 / 20.0).epsilon(1e-13));
}

TEST_CASE("ring anharmonicity at finite wavevector") {
  // nearest-neighbour ring J = 1: lambda = (cos k - 1)/N
  int n = 8;
  LatticeSpec lat = ring(n, 0.5, 0.0);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  CouplingTable t = build_couplings(lat, m);
  FourierTable tf = build_fourier_table(t, lat);
  for (int k = 0; k < n; ++k) {
    double kv = 2.0 * M_PI * k / n;
    CondensateSums s = condensate_sums(tf, lat, k, k);
    QubitParams p = params_from_condensate_sums(s);
    CHECK(p.lambda[0] == doctest::Approx((std::cos(kv) - 1.0) / n).epsilon(1e-12));
  }
}

TEST_CASE("zero-wavevector condensates match the dedicated path") {
  LatticeSpec lat = ring(6, 1.0, 0.2);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 0.8;
  m.d = 0.1;
  m.cross = ExchangeModel::uniform;
  m.J12 = 0.05;
  CouplingTable t = build_couplings(lat, m);
  FourierTable tf = build_fourier_table(t, lat);
  QubitParams a = basic_params(tf, lat);
  QubitParams dw = double_well_params(tf, lat, 0, 0);
  CHECK(a.E[0] == dw.E[0]);
  CHECK(a.E[1] == dw.E[1]);
  CHECK(a.lambda[0] == dw.lambda[0]);
  CHECK(a.lambda12 == dw.lambda12);
  CHECK(a.kappa == dw.kappa);
  CHECK(a.kappa_prime == dw.kappa_prime);
}

TEST_CASE("continuous-wavevector sums agree with the cached grid") {
  LatticeSpec lat = ring(5, 0.5, 0.1);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.2;
  m.d = 0.3;
  m.cross = ExchangeModel::uniform;
  m.J12 = 0.07;
  CouplingTable t = build_couplings(lat, m);
  FourierTable tf = build_fourier_table(t, lat);
  CondensateSums a = condensate_sums(tf, lat, 1, 2);
  CondensateSums c =
      condensate_sums_continuous(t, lat, tf.grid.k(1), tf.grid.k(2));
  for (int s = 0; s < 2; ++s) {
    CHECK(a.J0[s] == doctest::Approx(c.J0[s]).epsilon(1e-12));
    CHECK(a.Dt0[s] == doctest::Approx(c.Dt0[s]).epsilon(1e-12));
    CHECK(a.Dzz0[s] == doctest::Approx(c.Dzz0[s]).epsilon(1e-12));
    CHECK(a.Jk[s] == doctest::Approx(c.Jk[s]).epsilon(1e-12));
    CHECK(a.Dtk[s] == doctest::Approx(c.Dtk[s]).epsilon(1e-12));
  }
  CHECK(std::abs(a.cross_T - c.cross_T) < 1e-12);
  CHECK(a.cross_L00 == doctest::Approx(c.cross_L00).epsilon(1e-12));
}

TEST_CASE("opposite-sign anharmonicities are rejected") {
  CondensateSums s = manual_sums(10, 0.5, 0.0, 2.0, 1.0, 0.0, 2.0, 1.0);
  s.Dtk[1] = -1.0;
  s.Dt0[1] = -1.0;  // sample 2 drop has the opposite sign
  CHECK_THROWS_WITH_AS((void)params_from_condensate_sums(s),
                       doctest::Contains("synchronism is impossible"),
                       std::runtime_error);
}

TEST_CASE("matching residual forms") {
  SUBCASE("generic at equal anharmonicities") {
    QubitParams p = direct_params(0.0, 0.0, 0.3, 0.3, 1.0);
    CHECK(sync_residual(p, SyncForm::generic) == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("generic vanishes at the geometric-mean point") {
    QubitParams p = direct_params(0.0, 0.0, 1.0, 4.0, 4.0);
    CHECK(sync_residual(p, SyncForm::generic) == doctest::Approx(0.0));
  }
  SUBCASE("generic rejects an opposite-sign product") {
    QubitParams p = direct_params(0.0, 0.0, 1.0, -1.0, 0.0);
    CHECK_THROWS_AS((void)sync_residual(p, SyncForm::generic), std::runtime_error);
  }
  SUBCASE("identical samples at zero wavevector") {
    QubitParams p;
    p.src = manual_sums(4, 0.5, 0.0, 5.0, 0.0, -2.0, 5.0, 0.0, 0.0, 2.0);
    // T(0) = 5, L(0) = 3, cross(0,0) = 2 -> residual 0
    CHECK(sync_residual(p, SyncForm::equal_zero_k) == doctest::Approx(0.0));
  }
  SUBCASE("zero-wavevector form rejects unequal samples") {
    QubitParams p;
    p.src = manual_sums(4, 0.5, 0.0, 5.0, 0.0, -2.0, 5.0, 0.0, 0.0, 2.0);
    p.src.J0[1] = 6.0;
    CHECK_THROWS_WITH_AS((void)sync_residual(p, SyncForm::equal_zero_k),
                         doctest::Contains("identical samples"), std::runtime_error);
  }
  SUBCASE("transverse-free feasibility line") {
    QubitParams p;
    p.src = manual_sums(4, 0.5, 0.0, 1.5, -1.5, 0.3, 1.0, -1.0);
    CHECK(sync_residual(p, SyncForm::zero_transverse) == doctest::Approx(0.0));
  }
  SUBCASE("finite-wavevector radicand guard") {
    QubitParams p;
    p.src = manual_sums(4, 0.5, 0.0, 2.0, 0.0, 0.0, 3.0, 0.0);
    p.src.Jk[1] = 1.0;  // Tk - L0 positive for sample 1, negative for sample 2
    CHECK_THROWS_AS((void)sync_residual(p, SyncForm::finite_k), std::runtime_error);
  }
  SUBCASE("bond forms") {
    CHECK(sync_residual_bond_equal(5.0, 3.0, 2.0) == doctest::Approx(0.0));
    CHECK(sync_residual_bond(5.0, 3.0, 5.0, 3.0, 2.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)sync_residual_bond(5.0, 3.0, 1.0, 3.0, 2.0), std::runtime_error);
  }
}

TEST_CASE("root finding on the residual") {
  SUBCASE("single bracketed root") {
    auto roots = solve_synchronism([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0].x - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(roots[0].residual) < 1e-10);
  }
  SUBCASE("all roots reported in ascending order") {
    auto roots = solve_synchronism([](double x) { return std::sin(x); }, 0.1, 10.0, 2048);
    REQUIRE(roots.size() == 3);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(roots[(std::size_t)i].x - (i + 1) * M_PI) < 1e-9);
  }
  SUBCASE("no sign change carries the scan back") {
    try {
      (void)solve_synchronism([](double x) { return x * x + 1.0; }, 0.0, 1.0, 64);
      FAIL("expected NoRootError");
    } catch (const NoRootError& e) {
      CHECK(e.scan.size() == 65);
      CHECK(e.scan.front().x == doctest::Approx(0.0));
      CHECK(e.scan.back().x == doctest::Approx(1.0));
    }
  }
  SUBCASE("undefined nodes are skipped") {
    auto f = [](double x) {
      if (x < 1.0) throw std::runtime_error("outside the domain");
      return std::sqrt(x - 1.0) - 0.5;
    };
    auto roots = solve_synchronism(f, 0.0, 2.0, 256);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0].x - 1.25) < 1e-10);
  }
  SUBCASE("interval validation") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS((void)solve_synchronism(f, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)solve_synchronism(f, 0.0, 1.0, 1), std::invalid_argument);
  }
}

TEST_CASE("completed square reproduces the nonlinear part") {
  SUBCASE("unit symmetric point") {
    SquareForm q = square_form(direct_params(0.0, 0.0, 1.0, 1.0, 2.0));
    CHECK(q.evaluate(2.0, 5.0) == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(q.lambda_m == doctest::Approx(1.0));
    CHECK(q.m1 == doctest::Approx(1.0));
    CHECK(q.shift_m == doctest::Approx(0.0));
  }
  SUBCASE("asymmetric anharmonicities") {
    SquareForm q = square_form(direct_params(0.0, 0.0, 1.0, 4.0, 4.0));
    CHECK(q.evaluate(3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("equal energies remove the shift") {
    SquareForm q = square_form(direct_params(0.7, 0.7, 1.0, 4.0, 4.0));
    CHECK(q.shift_m == doctest::Approx(0.0));
    CHECK(q.nt_coeff == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(q.constant == doctest::Approx(0.0));
  }
  SUBCASE("requires the matching condition") {
    CHECK_THROWS_WITH_AS((void)square_form(direct_params(0.0, 0.0, 1.0, 1.0, 1.0)),
                         doctest::Contains("synchronism"), std::runtime_error);
    CHECK_THROWS_AS((void)square_form(direct_params(0.0, 0.0, 0.0, 0.0, 0.0)),
                    std::runtime_error);
  }
}

TEST_CASE("completed square equals the secular energy on random matched points") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::uniform_real_distribution<double> ue(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    double r1 = u(rng), r2 = u(rng);
    QubitParams p = direct_params(ue(rng), ue(rng), r1 * r1, r2 * r2, 2.0 * r1 * r2);
    SquareForm q = square_form(p);
    long n_t = 1 + (long)(rng() % 20);
    for (long n1 = 0; n1 <= n_t; ++n1) {
      double a = q.evaluate((double)n1, (double)(n_t - n1));
      double s = secular_energy(p, (double)n1, (double)(n_t - n1));
      CHECK(std::abs(a - s) <= 1e-12 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST_CASE("charge-like readout at the symmetric point") {
  QubitParams p = direct_params(0.0, 0.4, 0.1, 0.1, 0.2);
  SymmetricQubit q = symmetric_qubit(p);
  CHECK(q.lambda == doctest::Approx(0.1));
  CHECK(q.n_g == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q.nt_coeff == doctest::Approx(0.2));
  CHECK(q.constant == doctest::Approx(-0.1).epsilon(1e-13));
  CHECK(q.alt_ng_per_nt == doctest::Approx(2.0).epsilon(1e-13));

  // minimum of the diagonal energy over the n_t = 5 shell sits at (3,2)
  long best = -1;
  double best_e = 1e300;
  for (long n1 = 0; n1 <= 5; ++n1) {
    double e = secular_energy(p, (double)n1, (double)(5 - n1));
    if (e < best_e) {
      best_e = e;
      best = n1;
    }
  }
  CHECK(best == 3);

  // the working pair brackets that minimum; the cost tie resolves to smaller n1
  QubitPair pair = select_qubit_pair(p, 5);
  CHECK(pair.n1 == 2);
  CHECK(pair.n2 == 3);
}

TEST_CASE("symmetric reconstruction matches the secular energy at matching") {
  QubitParams p = direct_params(-0.3, 0.5, 0.2, 0.2, 0.4);
  SymmetricQubit q = symmetric_qubit(p);
  for (long n_t = 1; n_t <= 6; ++n_t)
    for (long n1 = 0; n1 <= n_t; ++n1) {
      double m = (double)(n1 - (n_t - n1));
      double rec = q.lambda * (m - q.n_g) * (m - q.n_g) + q.nt_coeff * (double)n_t + q.constant;
      double sec = secular_energy(p, (double)n1, (double)(n_t - n1));
      CHECK(std::abs(rec - sec) <= 1e-12 * std::max(1.0, std::abs(sec)));
    }
}

TEST_CASE("symmetric readout edge cases") {
  SUBCASE("equal energies center the offset") {
    SymmetricQubit q = symmetric_qubit(direct_params(0.3, 0.3, 0.1, 0.1, 0.2));
    CHECK(q.n_g == doctest::Approx(0.0));
    CHECK(std::isnan(q.alt_ng_per_nt));
  }
  SUBCASE("asymmetric anharmonicities are rejected") {
    CHECK_THROWS_WITH_AS((void)symmetric_qubit(direct_params(0.0, 0.0, 0.1, 0.2, 0.2)),
                         doctest::Contains("equal self-anharmonicities"), std::runtime_error);
  }
  SUBCASE("vanishing anharmonicity is rejected") {
    CHECK_THROWS_AS((void)symmetric_qubit(direct_params(0.0, 0.0, 0.0, 0.0, 0.0)),
                    std::runtime_error);
  }
  SUBCASE("defined away from the matching condition") {
    SymmetricQubit q = symmetric_qubit(direct_params(0.0, 0.8, 0.1, 0.1, 0.05));
    CHECK(q.n_g == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("square and symmetric forms tell the same diagonal story") {
  QubitParams p = direct_params(0.1, 0.9, 0.25, 0.25, 0.5);
  SquareForm sq = square_form(p);
  SymmetricQubit sy = symmetric_qubit(p);
  CHECK(sq.nt_coeff == doctest::Approx(sy.nt_coeff).epsilon(1e-13));
  CHECK(sq.constant == doctest::Approx(sy.constant).epsilon(1e-13));
  for (long n1 = 0; n1 <= 6; ++n1) {
    double m = (double)(n1 - (6 - n1));
    double a = sq.evaluate((double)n1, (double)(6 - n1));
    double b = sy.lambda * (m - sy.n_g) * (m - sy.n_g) + sy.nt_coeff * 6.0 + sy.constant;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("second differences of the shell spectrum are constant") {
  QubitParams p = direct_params(0.0, 0.4, 0.1, 0.1, 0.2);
  const long n_t = 8;
  for (long n1 = 1; n1 + 1 <= n_t; ++n1) {
    double d2 = secular_energy(p, (double)(n1 + 1), (double)(n_t - n1 - 1)) -
                2.0 * secular_energy(p, (double)n1, (double)(n_t - n1)) +
                secular_energy(p, (double)(n1 - 1), (double)(n_t - n1 + 1));
    CHECK(std::abs(d2 - 8.0 * 0.1) <= 1e-12);
  }
}

TEST_CASE("pair choice ignores a common energy shift") {
  QubitParams p = direct_params(0.1, 0.7, 0.15, 0.15, 0.3);
  QubitPair a = select_qubit_pair(p, 7);
  SymmetricQubit qa = symmetric_qubit(p);
  QubitParams shifted = p;
  shifted.E[0] += 2.5;
  shifted.E[1] += 2.5;
  QubitPair bpair = select_qubit_pair(shifted, 7);
  SymmetricQubit qb = symmetric_qubit(shifted);
  CHECK(a.n1 == bpair.n1);
  CHECK(a.n2 == bpair.n2);
  CHECK(qa.n_g == doctest::Approx(qb.n_g).epsilon(1e-12));
}

TEST_CASE("pair selection validation and symmetry") {
  QubitParams p = direct_params(0.2, 0.2, 0.1, 0.1, 0.2);
  CHECK_THROWS_AS((void)select_qubit_pair(p, 0), std::invalid_argument);
  QubitPair pr = select_qubit_pair(p, 6);  // tie around n1 = n2 resolves down
  CHECK(pr.n1 == 2);
  CHECK(pr.n2 == 4);
  long best = -1;
  double best_e = 1e300;
  for (long n1 = 0; n1 <= 6; ++n1) {
    double e = secular_energy(p, (double)n1, (double)(6 - n1));
    if (e < best_e) {
      best_e = e;
      best = n1;
    }
  }
  CHECK(best == 3);  // balanced state is the shell minimum when E1 = E2
}

TEST_CASE("occupation-dependent transfer coupling") {
  QubitParams p = direct_params(0.0, 0.0, 0.1, 0.1, 0.2, cplx(0.0, 0.0), 0.25);
  CHECK(pair_coupling(p, 5) == cplx(1.0, 0.0));
  CHECK(pair_coupling(p, 1) == cplx(0.0, 0.0));  // reduces to the linear hopping
  QubitParams q = direct_params(0.0, 0.0, 0.1, 0.1, 0.2, cplx(0.3, -0.1), 0.0);
  CHECK(pair_coupling(q, 1) == cplx(0.3, -0.1));
  QubitParams z = direct_params(0.0, 0.0, 0.1, 0.1, 0.0);
  for (long n_t = 1; n_t <= 9; ++n_t) CHECK(pair_coupling(z, n_t) == cplx(0.0, 0.0));
}

TEST_CASE("transfer-coupling report against the alternative normalization") {
  QubitParams p;
  p.E = {0.0, 0.0};
  p.lambda = {0.1, 0.1};
  p.lambda12 = 0.2;
  p.src = manual_sums(4, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.8, cplx(0.3, 0.1));
  p.src.spin = {0.5, 2.0};  // sqrt(S1 S2) = 1
  p.kappa = -cplx(0.3, 0.1);
  p.kappa_prime = 0.8 / 16.0;
  KReport r = pair_coupling_report(p, 5);
  CHECK(std::abs(r.composed - cplx(-0.1, -0.1)) < 1e-14);
  CHECK(std::abs(r.alt_normalized - cplx(-0.025, -0.025)) < 1e-14);
  CHECK(r.discrepancy == doctest::Approx(0.075 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("two-mode term sum realizes the reduced model") {
  QubitParams p = direct_params(0.3, 0.5, 0.12, 0.12, 0.24, cplx(0.05, 0.02), 0.03);
  BosonTermSum h = qubit_terms(p);
  const long n_t = 3;
  FockSpace sp = FockSpace::build({(int)n_t, (int)n_t}, (int)n_t);
  Eigen::MatrixXcd m = build_fock_matrix(h, sp);
  CHECK(hermiticity_residual(m) < 1e-13);
  cplx big_k = pair_coupling(p, n_t);
  for (std::size_t r = 0; r < sp.dim(); ++r) {
    long n1 = sp.state(r)[0], n2 = sp.state(r)[1];
    CHECK(std::abs(m((Eigen::Index)r, (Eigen::Index)r) -
                   secular_energy(p, (double)n1, (double)n2)) < 1e-13);
    long up = sp.index_of({(int)n1 + 1, (int)n2 - 1});
    if (up >= 0) {
      cplx expect = big_k * std::sqrt((double)((n1 + 1) * n2));
      CHECK(std::abs(m((Eigen::Index)up, (Eigen::Index)r) - expect) < 1e-13);
    }
    for (std::size_t c = 0; c < sp.dim(); ++c) {
      long d = sp.state(c)[0] - (int)n1;
      if (d > 1 || d < -1)
        CHECK(std::abs(m((Eigen::Index)c, (Eigen::Index)r)) < 1e-14);
    }
  }
}

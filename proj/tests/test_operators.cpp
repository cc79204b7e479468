#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mbq/fock.hpp>
#include <mbq/operators.hpp>

using namespace mbq;

TEST_CASE("normal ordering inserts the commutator") {
  BosonTermSum s;
  s.add(1.0, {b(0), bdag(0)});  // b b+ = b+ b + 1
  BosonTermSum n = s.normal_ordered();
  CHECK(n.coefficient_of({bdag(0), b(0)}) == cplx(1.0));
  CHECK(n.coefficient_of({}) == cplx(1.0));
}

TEST_CASE("distinct modes commute freely") {
  BosonTermSum s;
  s.add(2.0, {b(1), bdag(0)});
  BosonTermSum n = s.normal_ordered();
  CHECK(n.size() == 1);
  CHECK(n.coefficient_of({bdag(0), b(1)}) == cplx(2.0));
}

TEST_CASE("double annihilator commutator") {
  // b b b+ = b+ b b + 2 b
  BosonTermSum s;
  s.add(1.0, {b(0), b(0), bdag(0)});
  BosonTermSum n = s.normal_ordered();
  CHECK(n.coefficient_of({bdag(0), b(0), b(0)}) == cplx(1.0));
  CHECK(n.coefficient_of({b(0)}) == cplx(2.0));
}

TEST_CASE("like terms collect and cancel") {
  BosonTermSum s;
  s.add(1.5, {bdag(0), b(0)});
  s.add(-1.5, {bdag(0), b(0)});
  s.add(cplx(0.0, 2.0), {bdag(1), b(0)});
  BosonTermSum n = s.normal_ordered();
  CHECK(n.size() == 1);
  CHECK(n.coefficient_of({bdag(0), b(0)}) == cplx(0.0));
  CHECK(n.coefficient_of({bdag(1), b(0)}) == cplx(0.0, 2.0));
}

TEST_CASE("adjoint conjugates and reverses") {
  BosonTermSum s;
  s.add(cplx(0.0, 1.0), {bdag(0), b(1)});
  BosonTermSum a = s.adjoint().normal_ordered();
  CHECK(a.coefficient_of({bdag(1), b(0)}) == cplx(0.0, -1.0));
}

TEST_CASE("number conservation detection") {
  BosonTermSum s;
  s.add(1.0, {bdag(0), b(1)});
  CHECK(s.number_conserving());
  s.add(1.0, {bdag(0), bdag(1)});
  CHECK(!s.number_conserving());
  CHECK(s.first_nonconserving() == 1);
}

TEST_CASE("substitution expands modes linearly") {
  // b_0 -> (b_1 + b_2)/sqrt(2); the number operator maps to the symmetric mix
  BosonTermSum s;
  s.add(1.0, {bdag(0), b(0)});
  const double r = 1.0 / std::sqrt(2.0);
  auto exp = [&](int mode) -> std::vector<std::pair<cplx, int>> {
    if (mode == 0) return {{r, 1}, {r, 2}};
    return {{1.0, mode}};
  };
  BosonTermSum out = s.substituted(exp).normal_ordered();
  CHECK(out.coefficient_of({bdag(1), b(1)}).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.coefficient_of({bdag(2), b(2)}).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.coefficient_of({bdag(1), b(2)}).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.coefficient_of({bdag(2), b(1)}).real() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("substitution with a complex phase keeps hermiticity") {
  BosonTermSum s;
  s.add(1.0, {bdag(0), b(1)});
  s.add(1.0, {bdag(1), b(0)});
  cplx phase = std::exp(cplx(0.0, 0.7));
  auto exp = [&](int mode) -> std::vector<std::pair<cplx, int>> {
    if (mode == 0) return {{phase, 0}};
    return {{1.0, mode}};
  };
  BosonTermSum out = s.substituted(exp).normal_ordered();
  cplx up = out.coefficient_of({bdag(0), b(1)});
  cplx dn = out.coefficient_of({bdag(1), b(0)});
  CHECK(std::abs(up - std::conj(dn)) < 1e-15);
}

TEST_CASE("fock space sizes with and without a shell") {
  CHECK(FockSpace::build({5, 5}, 5).dim() == 6);         // (0,5)..(5,0)
  CHECK(FockSpace::build({2, 2, 2, 2}, 2).dim() == 10);  // pairs over 4 modes
  CHECK(FockSpace::build({1, 1, 1, 1}, 3).dim() == 4);   // choose 3 of 4 singly
  CHECK(FockSpace::build({3}).dim() == 4);               // no shell: 0..cap
  CHECK(FockSpace::build({2, 2}).dim() == 9);
}

TEST_CASE("shell keeps only exact totals") {
  FockSpace sp = FockSpace::build({4, 4}, 3);
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    const auto& st = sp.state(i);
    CHECK(st[0] + st[1] == 3);
  }
  CHECK(sp.index_of({1, 2}) >= 0);
  CHECK(sp.index_of({2, 2}) == -1);
}

TEST_CASE("single-mode anharmonic ladder matrix") {
  // E n + lambda n^2 with n^2 = n + b+ b+ b b
  const double E = 0.3, lam = 0.05;
  BosonTermSum s;
  s.add(E + lam, {bdag(0), b(0)});
  s.add(lam, {bdag(0), bdag(0), b(0), b(0)});
  FockSpace sp = FockSpace::build({3});
  Eigen::MatrixXcd h = build_fock_matrix(s, sp);
  REQUIRE(h.rows() == 4);
  CHECK(std::abs(h(0, 0)) < 1e-15);
  CHECK(h(1, 1).real() == doctest::Approx(E + lam).epsilon(1e-15));
  CHECK(h(2, 2).real() == doctest::Approx(2 * E + 4 * lam).epsilon(1e-15));
  CHECK(h(3, 3).real() == doctest::Approx(3 * E + 9 * lam).epsilon(1e-15));
  CHECK(h.cwiseAbs().sum() == doctest::Approx(h.diagonal().cwiseAbs().sum()));
}

TEST_CASE("ladder amplitude at high occupation") {
  // <1,99| b+_0 b_1 |0,100> = sqrt(1 * 100) = 10
  BosonTermSum s;
  s.add(1.0, {bdag(0), b(1)});
  FockSpace sp = FockSpace::from_states(2, {{0, 100}, {1, 99}});
  Eigen::MatrixXcd h = build_fock_matrix(s, sp);
  CHECK(h(1, 0).real() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(std::abs(h(0, 1)) < 1e-15);
}

TEST_CASE("matrix assembly projects states leaving the space") {
  BosonTermSum s;
  s.add(1.0, {bdag(0), b(1)});
  s.add(1.0, {bdag(1), b(0)});
  FockSpace sp = FockSpace::from_states(2, {{0, 2}, {1, 1}});  // (2,0) missing
  Eigen::MatrixXcd h = build_fock_matrix(s, sp);
  CHECK(h(1, 0).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(h(0, 1).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(h(1, 1)) < 1e-15);  // the (2,0) amplitude is projected away
}

TEST_CASE("non-conserving sums are rejected by the matrix builder") {
  BosonTermSum s;
  s.add(1.0, {bdag(0), bdag(1)});
  FockSpace sp = FockSpace::build({2, 2});
  CHECK_THROWS_AS((void)build_fock_matrix(s, sp), std::invalid_argument);
}

TEST_CASE("hermiticity and number-commutator residuals") {
  FockSpace sp = FockSpace::build({2, 2});
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero((long)sp.dim(), (long)sp.dim());
  h(0, 1) = cplx(0.0, 1.0);
  h(1, 0) = cplx(0.0, -1.0);
  CHECK(hermiticity_residual(h) < 1e-15);
  h(1, 0) = cplx(0.0, -0.5);
  CHECK(hermiticity_residual(h) == doctest::Approx(0.5));

  // an entry connecting different totals makes the number commutator nonzero
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero((long)sp.dim(), (long)sp.dim());
  long i00 = sp.index_of({0, 0}), i10 = sp.index_of({1, 0}), i01 = sp.index_of({0, 1});
  g(i10, i00) = 2.0;
  CHECK(number_commutator_residual(g, sp) == doctest::Approx(2.0));
  g.setZero();
  g(i10, i01) = 3.0;  // same total: conserved
  CHECK(number_commutator_residual(g, sp) < 1e-15);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mbq/couplings.hpp>
#include <mbq/fourier.hpp>
#include <mbq/spin_exact.hpp>

using namespace mbq;

namespace {

// two spin-1/2 sites coupled only across the samples
LatticeSpec pair_lattice(double h1 = 0.0, double h2 = 0.0) {
  return make_lattice({1, 1, 1}, 1.0, 1.0, 0.5, 0.5, h1, h2);
}

CouplingTable heisenberg_pair(const LatticeSpec& lat, double J) {
  CouplingModel m;
  m.intra = ExchangeModel::none;
  m.cross = ExchangeModel::uniform;
  m.J12 = J;
  return build_couplings(lat, m);
}

}  // namespace

TEST_CASE("isotropic pair spectrum: triplet below singlet") {
  LatticeSpec lat = pair_lattice();
  CouplingTable t = heisenberg_pair(lat, 1.0);
  auto h = build_spin_matrix(lat, t);
  auto e = spectrum(h, 4);
  REQUIRE(e.size() == 4);
  CHECK(e[0] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(e[2] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(e[3] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("pure field splits the two-site spectrum linearly") {
  LatticeSpec lat = pair_lattice(1.0, 1.0);
  CouplingModel m;
  m.intra = ExchangeModel::none;
  CouplingTable t = build_couplings(lat, m);
  auto e = spectrum(build_spin_matrix(lat, t), 4);
  CHECK(e[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polarized product state energy of a ferromagnetic ring") {
  // 4-ring J=1 S=1/2: E = -sum_bonds J S^2 = -4/4 = -1 per sample
  LatticeSpec lat = make_lattice({4, 1, 1}, 1.0, 1.0, 0.5, 0.5, 0.0, 0.0);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  CouplingTable t = build_couplings(lat, m);
  SpinSystem sys = make_spin_system_sample(lat, t, 0);
  CHECK(polarized_energy(sys) == doctest::Approx(-1.0).epsilon(1e-14));
  SpinSystem both = make_spin_system(lat, t);
  CHECK(polarized_energy(both) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("one-magnon dispersion of the 6-ring") {
  // nearest-neighbor J=1, S=1/2: E(k) = 1 - cos k; a field shifts by S h
  for (double h : {0.0, 0.5}) {
    LatticeSpec lat = make_lattice({6, 1, 1}, 1.0, 1.0, 0.5, 0.5, h, h);
    CouplingModel m;
    m.intra = ExchangeModel::nearest_neighbor;
    m.J = 1.0;
    CouplingTable t = build_couplings(lat, m);
    auto pts = exact_dispersion(lat, t, 0);
    REQUIRE(pts.size() == 6);
    for (const auto& p : pts) {
      double expect = 1.0 - std::cos(p.k[0]) + 0.5 * h;
      CHECK(p.energy == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-magnon energies agree with the full spectrum gap") {
  // at S = 1 the band normalization (gap S h) and the bare spin matrix
  // (gap h) coincide, so the softest dispersion point must equal the exact
  // excitation gap even with a field on
  LatticeSpec lat = make_lattice({6, 1, 1}, 1.0, 1.0, 1.0, 1.0, 0.3, 0.3);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  CouplingTable t = build_couplings(lat, m);
  SpinSystem sys = make_spin_system_sample(lat, t, 0);
  auto e = spectrum(build_spin_matrix(sys), 2);
  auto pts = exact_dispersion(lat, t, 0);
  double e_min = 1e300;
  for (const auto& p : pts) e_min = std::min(e_min, p.energy);
  // lowest excitation above the polarized ground state is the softest magnon
  CHECK(e[0] == doctest::Approx(polarized_energy(sys)).epsilon(1e-12));
  CHECK(e[1] - e[0] == doctest::Approx(e_min).epsilon(1e-10));
}

TEST_CASE("higher spin scales the dispersion") {
  // S=1: E(k) = 2 J (1 - cos k) S = 2 (1 - cos k) ... i.e. S * (L0 - T(k))
  LatticeSpec lat = make_lattice({4, 1, 1}, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  CouplingTable t = build_couplings(lat, m);
  auto pts = exact_dispersion(lat, t, 0);
  for (const auto& p : pts)
    CHECK(p.energy == doctest::Approx(2.0 * (1.0 - std::cos(p.k[0]))).epsilon(1e-12));
}

TEST_CASE("sample extraction rejects coupled samples") {
  LatticeSpec lat = make_lattice({2, 1, 1}, 1.0, 1.0, 0.5, 0.5, 0.0, 0.0);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  m.cross = ExchangeModel::uniform;
  m.J12 = 0.1;
  CouplingTable t = build_couplings(lat, m);
  CHECK_THROWS_AS((void)make_spin_system_sample(lat, t, 0), std::invalid_argument);
}

TEST_CASE("anisotropic couplings enter the pair matrix") {
  // single cross pair with a pure zz coupling: product basis stays diagonal
  LatticeSpec lat = pair_lattice();
  CouplingModel m;
  m.intra = ExchangeModel::none;
  m.cross = ExchangeModel::none;
  SymTensor d;
  d.zz = 1.0;
  m.D_entries = {{0, 1, d}};
  CouplingTable t = build_couplings(lat, m);
  auto e = spectrum(build_spin_matrix(lat, t), 4);
  // H = -D^zz Sz Sz: aligned pairs at -1/4, anti-aligned at +1/4
  CHECK(e[0] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(e[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e[3] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("matrix dimension guard") {
  LatticeSpec lat = make_lattice({8, 1, 1}, 1.0, 1.0, 1.5, 1.5, 0.0, 0.0);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  CouplingTable t = build_couplings(lat, m);
  // 4^16 states blows the default cap
  CHECK_THROWS_AS((void)build_spin_matrix(lat, t), std::invalid_argument);
}

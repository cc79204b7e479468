// bosonize.hpp -- ladder-boson form of the spin Hamiltonian: real-space
// expansion to first order beyond quadratic, and the wavevector-space
// coefficients obtained from the lattice Fourier transforms.
//
// Shorthand used throughout: for a pair coupling (J, D),
//   T = J + (D^xx + D^yy)/2   (transverse channel)
//   L = J + D^zz              (longitudinal channel)
// The number-conserving sector is built entirely from T and L; anisotropy
// components (D^xx - D^yy, D^xy, D^xz, D^yz) only enter non-conserving terms.
#pragma once

#include <array>

#include "mbq/couplings.hpp"
#include "mbq/fock.hpp"
#include "mbq/fourier.hpp"
#include "mbq/operators.hpp"

namespace mbq {

// Real-space expansion. Mode id = global site id.
struct HPExpansion {
  double constant{0.0};         // fully polarized reference energy
  BosonTermSum conserving;      // quadratic hopping + quartic interactions
  BosonTermSum nonconserving;   // linear, pair-creation and cubic diagnostics
};

HPExpansion hp_expand(const LatticeSpec& lat, const CouplingTable& table,
                      bool keep_nonconserving = false);

// Wavevector-space Hamiltonian over selected condensate mode sets (grid
// indices per sample). Mode ids count through k_set[0] then k_set[1].
struct KSpaceHamiltonian {
  KGrid grid;
  std::array<std::vector<int>, 2> k_set;
  std::vector<double> A_intra;   // diagonal quadratic coefficient per mode
  Eigen::MatrixXcd A_cross;      // rows k_set[0], cols k_set[1]
  BosonTermSum terms;            // complete number-conserving term sum

  int n_modes() const { return (int)(k_set[0].size() + k_set[1].size()); }
  int mode_id(int sample, int k_index) const;
  std::pair<int, int> mode_label(int mode) const;  // (sample, grid k index)
};

KSpaceHamiltonian kspace_coefficients(const FourierTable& tf, const LatticeSpec& lat,
                                      std::vector<int> k_set1, std::vector<int> k_set2);

// Site -> wavevector mode change b_site = (1/sqrt N) sum_k exp(i k.r) b_k,
// expressed in the mode ids of `ksp` (which must cover the full grid).
BosonTermSum to_kspace(const BosonTermSum& site_terms, const LatticeSpec& lat,
                       const KSpaceHamiltonian& ksp);

}  // namespace mbq

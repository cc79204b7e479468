// spin_exact.hpp -- exact spin-operator treatment of the pair Hamiltonian
// on the full product basis; the independent reference for the bosonized model.
#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "mbq/couplings.hpp"
#include "mbq/fourier.hpp"
#include "mbq/geometry.hpp"

namespace mbq {

// H = - sum_{i<j} sum_{ab} (J_ij delta^ab + D^ab_ij) S^a_i S^b_j - sum_i h_i S^z_i
// as a term list over an arbitrary site subset.
struct SpinSystem {
  std::vector<double> S;               // spin per site
  std::vector<double> field;           // h per site
  struct PairTerm {
    int i, j;
    double phi[3][3];                  // coupling matrix of the unordered pair
  };
  std::vector<PairTerm> pairs;

  std::size_t dim() const;
};

SpinSystem make_spin_system(const LatticeSpec& lat, const CouplingTable& table);
// sites of the chosen sample only (cross couplings must vanish; throws otherwise)
SpinSystem make_spin_system_sample(const LatticeSpec& lat, const CouplingTable& table, int sample);

// Full sparse matrix on the product basis, sites in mixed-radix order with the
// last site fastest. `cap` guards the dimension.
Eigen::SparseMatrix<cplx> build_spin_matrix(const SpinSystem& sys, std::size_t cap = 1u << 20);
Eigen::SparseMatrix<cplx> build_spin_matrix_serial(const SpinSystem& sys, std::size_t cap = 1u << 20);
inline Eigen::SparseMatrix<cplx> build_spin_matrix(const LatticeSpec& lat,
                                                   const CouplingTable& table,
                                                   std::size_t cap = 1u << 20) {
  return build_spin_matrix(make_spin_system(lat, table), cap);
}

// Lowest `count` eigenvalues in ascending order, degeneracies repeated.
// Dense solve below dim 4096, Lanczos with full reorthogonalization above.
// Throws when the matrix is not Hermitian (residual > 1e-10).
std::vector<double> spectrum(const Eigen::SparseMatrix<cplx>& h, int count);

struct DispersionPoint {
  int k_index;
  Vec3 k;
  double energy;  // E(k) - E_ground
};

// One-magnon excitation energies of a decoupled, S^z-conserving,
// translation-invariant sample, labelled by wavevector.
std::vector<DispersionPoint> exact_dispersion(const LatticeSpec& lat, const CouplingTable& table,
                                              int sample);

// Energy of the fully polarized product state of the (sub)system.
double polarized_energy(const SpinSystem& sys);

}  // namespace mbq

// fourier.hpp -- lattice Fourier transforms of the pair couplings.
//
// Conventions (for samples of N sites on a shared periodic grid):
//   intra-sample:  F(k)      = sum_{rho != 0} f(rho) exp(-i k.rho)        (no 1/N)
//   cross-sample:  F(k1,k2)  = (1/N) sum_{j1,j2} f_{j1 j2}
//                              exp(-i k1.r_{j1}) exp(-i k2.r_{j2})
// The asymmetry in the 1/N factors is forced by the mode change
// b_site = (1/sqrt N) sum_k exp(i k.r) b_k applied to quadratic pair terms.
#pragma once

#include <array>
#include <complex>

#include "mbq/couplings.hpp"
#include "mbq/geometry.hpp"

namespace mbq {

// Reciprocal grid matching a Grid of the same dims: k = 2 pi m / (n a) per axis.
struct KGrid {
  std::array<int, 3> dims{1, 1, 1};
  double spacing{1.0};

  int size() const { return dims[0] * dims[1] * dims[2]; }
  std::array<int, 3> split(int idx) const {
    return {idx / (dims[1] * dims[2]), (idx / dims[2]) % dims[1], idx % dims[2]};
  }
  int fuse(const std::array<int, 3>& m) const {
    return (m[0] * dims[1] + m[1]) * dims[2] + m[2];
  }
  Vec3 k(int idx) const {
    auto m = split(idx);
    return Vec3(2.0 * M_PI * m[0] / (dims[0] * spacing), 2.0 * M_PI * m[1] / (dims[1] * spacing),
                2.0 * M_PI * m[2] / (dims[2] * spacing));
  }
  int add(int a, int b) const {
    auto ma = split(a), mb = split(b);
    return fuse({(ma[0] + mb[0]) % dims[0], (ma[1] + mb[1]) % dims[1], (ma[2] + mb[2]) % dims[2]});
  }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int neg(int a) const {
    auto m = split(a);
    return fuse({(dims[0] - m[0]) % dims[0], (dims[1] - m[1]) % dims[1], (dims[2] - m[2]) % dims[2]});
  }
};

struct TransformValue {
  cplx J{0.0, 0.0};
  std::array<cplx, 6> D{};  // components ordered as SymTensor: xx yy zz xy xz yz
  cplx transverse() const { return J + 0.5 * (D[0] + D[1]); }
  cplx longitudinal() const { return J + D[2]; }
};

// Transforms evaluated at arbitrary wavevectors, straight from the coupling
// table. Intra requires translation-invariant couplings (throws naming the
// offending pair otherwise); cross is the literal double sum.
TransformValue intra_transform(const CouplingTable& table, const LatticeSpec& lat, int sample,
                               const Vec3& k);
TransformValue cross_transform(const CouplingTable& table, const LatticeSpec& lat, const Vec3& k1,
                               const Vec3& k2);

// Cached transforms over the full reciprocal grid of a generated lattice.
// When the cross couplings are translation invariant the cross transform is
// nonzero only for k1 + k2 = 0 (mod G) and is stored as that diagonal.
struct FourierTable {
  KGrid grid;
  std::array<Eigen::VectorXcd, 2> J_intra;
  std::array<std::array<Eigen::VectorXcd, 6>, 2> D_intra;

  bool cross_invariant{false};
  Eigen::VectorXcd J_cross_diag;                 // value paired with k1 = -k2
  std::array<Eigen::VectorXcd, 6> D_cross_diag;
  Eigen::MatrixXcd J_cross_full;                 // literal table otherwise
  std::array<Eigen::MatrixXcd, 6> D_cross_full;

  cplx j_intra(int sample, int k) const;
  cplx d_intra(int sample, int comp, int k) const;
  cplx j_cross(int k1, int k2) const;
  cplx d_cross(int comp, int k1, int k2) const;

  TransformValue intra(int sample, int k) const;
  TransformValue cross(int k1, int k2) const;

 private:
  void check_k(int k, const char* what) const;
};

FourierTable build_fourier_table(const CouplingTable& table, const LatticeSpec& lat);
FourierTable build_fourier_table_serial(const CouplingTable& table, const LatticeSpec& lat);

}  // namespace mbq

// couplings.hpp -- exchange + dipole pair couplings and their symmetry diagnostics.
#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "mbq/geometry.hpp"

namespace mbq {

// Symmetric 3x3 tensor, components ordered xx, yy, zz, xy, xz, yz.
struct SymTensor {
  double xx{0}, yy{0}, zz{0}, xy{0}, xz{0}, yz{0};

  double comp(int a, int b) const {
    if (a == b) return a == 0 ? xx : (a == 1 ? yy : zz);
    int lo = a < b ? a : b, hi = a < b ? b : a;
    if (lo == 0) return hi == 1 ? xy : xz;
    return yz;
  }
  double trace() const { return xx + yy + zz; }
  SymTensor& operator+=(const SymTensor& o) {
    xx += o.xx; yy += o.yy; zz += o.zz; xy += o.xy; xz += o.xz; yz += o.yz;
    return *this;
  }
};

// Point-dipole tensor D^ab = d (3 n^a n^b - delta^ab) / |r|^3 for displacement r.
SymTensor dipole_tensor(const Vec3& r, double d);

enum class ExchangeModel { none, uniform, nearest_neighbor, table };

struct CouplingModel {
  ExchangeModel intra{ExchangeModel::uniform};
  double J{0.0};  // intra-sample exchange constant
  ExchangeModel cross{ExchangeModel::none};
  double J12{0.0};  // cross-sample exchange constant
  double d{0.0};    // dipole strength, intra pairs
  std::optional<double> d_cross;  // dipole strength for cross pairs (default: d)
  // explicit entries (used with ExchangeModel::table); applied after the models
  std::vector<std::tuple<int, int, double>> J_entries;
  std::vector<std::tuple<int, int, SymTensor>> D_entries;
};

// Pair couplings for all unordered site pairs, symmetric by construction:
// J_ij = J_ji and D_ij = D_ji (the dipole tensor is even in the displacement).
class CouplingTable {
 public:
  CouplingTable() = default;
  explicit CouplingTable(int n_sites)
      : n_(n_sites), J_(n_sites * (n_sites - 1) / 2), D_(n_sites * (n_sites - 1) / 2) {}

  int n_sites() const { return n_; }
  double J(int i, int j) const { return i == j ? 0.0 : J_[pair(i, j)]; }
  const SymTensor& D(int i, int j) const { return D_[pair(i, j)]; }
  double& J_ref(int i, int j) { return J_[pair(i, j)]; }
  SymTensor& D_ref(int i, int j) { return D_[pair(i, j)]; }

  // transverse and longitudinal combinations used throughout:
  //   T = J + (D^xx + D^yy)/2,  L = J + D^zz
  double transverse(int i, int j) const {
    return i == j ? 0.0 : J(i, j) + 0.5 * (D(i, j).xx + D(i, j).yy);
  }
  double longitudinal(int i, int j) const { return i == j ? 0.0 : J(i, j) + D(i, j).zz; }

 private:
  std::size_t pair(int i, int j) const;
  int n_{0};
  std::vector<double> J_;
  std::vector<SymTensor> D_;
};

CouplingTable build_couplings(const LatticeSpec& lat, const CouplingModel& model);

struct SymmetryReport {
  double max_zx{0}, max_zy{0}, max_xy{0};  // largest off-diagonal dipole components
  double max_xx_yy_diff{0};                // largest |D^xx - D^yy|
  double max_translation_violation{0};     // largest same-displacement coupling spread
  int worst_pair_i{-1}, worst_pair_j{-1};  // pair realizing the violation (-1 if none)

  // true when the couplings commute with total S^z (axially symmetric dipoles)
  bool sz_conserving(double tol = 1e-12) const {
    return max_zx <= tol && max_zy <= tol && max_xy <= tol && max_xx_yy_diff <= tol;
  }
};

SymmetryReport symmetry_report(const CouplingTable& table, const LatticeSpec& lat);

}  // namespace mbq

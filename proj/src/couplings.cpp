#include "mbq/couplings.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace mbq {

namespace {

std::string pair_str(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// grouping key: (sample_i, sample_j, displacement quantized to 1e-6)
using DispKey = std::tuple<int, int, std::int64_t, std::int64_t, std::int64_t>;

DispKey disp_key(const LatticeSpec& lat, int i, int j) {
  Vec3 d = lat.displacement(i, j);
  auto q = [](double x) { return (std::int64_t)std::llround(x * 1e6); };
  return {lat.sample_of(i), lat.sample_of(j), q(d[0]), q(d[1]), q(d[2])};
}

}  // namespace

std::size_t CouplingTable::pair(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::invalid_argument("coupling table: bad pair " + pair_str(i, j));
  int lo = i < j ? i : j, hi = i < j ? j : i;
  return (std::size_t)lo * n_ - (std::size_t)lo * (lo + 1) / 2 + (hi - lo - 1);
}

SymTensor dipole_tensor(const Vec3& r, double d) {
  double rn = r.norm();
  if (rn < 1e-12) throw std::invalid_argument("dipole tensor: zero displacement");
  Vec3 n = r / rn;
  double s = d / (rn * rn * rn);
  SymTensor t;
  t.xx = s * (3.0 * n[0] * n[0] - 1.0);
  t.yy = s * (3.0 * n[1] * n[1] - 1.0);
  t.zz = s * (3.0 * n[2] * n[2] - 1.0);
  t.xy = s * 3.0 * n[0] * n[1];
  t.xz = s * 3.0 * n[0] * n[2];
  t.yz = s * 3.0 * n[1] * n[2];
  return t;
}

CouplingTable build_couplings(const LatticeSpec& lat, const CouplingModel& model) {
  lat.validate();
  const int n = lat.n_sites();
  CouplingTable table(n);

  // minimal pair distances set the nearest-neighbor bonds
  double min_intra = 0.0, min_cross = 0.0;
  {
    double mi = 1e300, mc = 1e300;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double r = lat.displacement(i, j).norm();
        if (lat.sample_of(i) == lat.sample_of(j)) mi = std::min(mi, r);
        else mc = std::min(mc, r);
      }
    min_intra = mi;
    min_cross = mc;
  }

  const double d_cross = model.d_cross.value_or(model.d);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool cross = lat.sample_of(i) != lat.sample_of(j);
      const ExchangeModel em = cross ? model.cross : model.intra;
      const double strength = cross ? model.J12 : model.J;
      const Vec3 disp = lat.displacement(i, j);
      double Jij = 0.0;
      switch (em) {
        case ExchangeModel::none:
        case ExchangeModel::table:
          break;
        case ExchangeModel::uniform:
          Jij = strength;
          break;
        case ExchangeModel::nearest_neighbor:
          if (std::abs(disp.norm() - (cross ? min_cross : min_intra)) < 1e-9) Jij = strength;
          break;
      }
      table.J_ref(i, j) = Jij;
      const double dd = cross ? d_cross : model.d;
      if (dd != 0.0) table.D_ref(i, j) = dipole_tensor(disp, dd);
    }
  }

  // explicit exchange entries: only meaningful under the table model for their class
  std::map<std::pair<int, int>, double> seen_J;
  for (const auto& [i, j, v] : model.J_entries) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw std::invalid_argument("couplings: bad explicit J entry for pair " + pair_str(i, j));
    const bool cross = lat.sample_of(i) != lat.sample_of(j);
    if ((cross ? model.cross : model.intra) != ExchangeModel::table)
      throw std::invalid_argument("couplings: explicit J entry " + pair_str(i, j) +
                                  " given but the corresponding model is not 'table'");
    auto key = std::minmax(i, j);
    auto [it, fresh] = seen_J.emplace(std::pair<int, int>(key.first, key.second), v);
    if (!fresh) {
      if (std::abs(it->second - v) > 1e-12)
        throw std::invalid_argument("couplings: asymmetric explicit J entries for pair " +
                                    pair_str(i, j));
      continue;
    }
    table.J_ref(i, j) = v;
  }

  std::map<std::pair<int, int>, SymTensor> seen_D;
  for (const auto& [i, j, t] : model.D_entries) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw std::invalid_argument("couplings: bad explicit D entry for pair " + pair_str(i, j));
    auto key = std::minmax(i, j);
    auto [it, fresh] = seen_D.emplace(std::pair<int, int>(key.first, key.second), t);
    if (!fresh) {
      const SymTensor& p = it->second;
      double diff = std::abs(p.xx - t.xx) + std::abs(p.yy - t.yy) + std::abs(p.zz - t.zz) +
                    std::abs(p.xy - t.xy) + std::abs(p.xz - t.xz) + std::abs(p.yz - t.yz);
      if (diff > 1e-12)
        throw std::invalid_argument("couplings: asymmetric explicit D entries for pair " +
                                    pair_str(i, j));
      continue;
    }
    table.D_ref(i, j) = t;
  }

  return table;
}

SymmetryReport symmetry_report(const CouplingTable& table, const LatticeSpec& lat) {
  SymmetryReport rep;
  const int n = lat.n_sites();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const SymTensor& D = table.D(i, j);
      rep.max_zx = std::max(rep.max_zx, std::abs(D.xz));
      rep.max_zy = std::max(rep.max_zy, std::abs(D.yz));
      rep.max_xy = std::max(rep.max_xy, std::abs(D.xy));
      rep.max_xx_yy_diff = std::max(rep.max_xx_yy_diff, std::abs(D.xx - D.yy));
    }
  }

  // translation invariance: all ordered pairs with the same displacement class
  // must carry the same coupling
  struct Ref { double J; SymTensor D; int i, j; };
  std::map<DispKey, Ref> ref;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      DispKey key = disp_key(lat, i, j);
      auto it = ref.find(key);
      if (it == ref.end()) {
        ref.emplace(key, Ref{table.J(i, j), table.D(i, j), i, j});
        continue;
      }
      const Ref& r = it->second;
      const SymTensor& D = table.D(i, j);
      double dev = std::abs(table.J(i, j) - r.J);
      dev = std::max(dev, std::abs(D.xx - r.D.xx));
      dev = std::max(dev, std::abs(D.yy - r.D.yy));
      dev = std::max(dev, std::abs(D.zz - r.D.zz));
      dev = std::max(dev, std::abs(D.xy - r.D.xy));
      dev = std::max(dev, std::abs(D.xz - r.D.xz));
      dev = std::max(dev, std::abs(D.yz - r.D.yz));
      if (dev > rep.max_translation_violation) {
        rep.max_translation_violation = dev;
        rep.worst_pair_i = i;
        rep.worst_pair_j = j;
      }
    }
  }
  return rep;
}

}  // namespace mbq

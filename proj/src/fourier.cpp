#include "mbq/fourier.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mbq {

namespace {

constexpr double kClassTol = 1e-9;  // coupling spread tolerated within a displacement class

struct DispClass {
  Vec3 rho;
  double J;
  SymTensor D;
  int count;
  int ref_i, ref_j;
};

using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

Key quantize(const Vec3& v) {
  auto q = [](double x) { return (std::int64_t)std::llround(x * 1e6); };
  return {q(v[0]), q(v[1]), q(v[2])};
}

double coupling_spread(const CouplingTable& t, int i, int j, const DispClass& c) {
  const SymTensor& D = t.D(i, j);
  double dev = std::abs(t.J(i, j) - c.J);
  dev = std::max(dev, std::abs(D.xx - c.D.xx));
  dev = std::max(dev, std::abs(D.yy - c.D.yy));
  dev = std::max(dev, std::abs(D.zz - c.D.zz));
  dev = std::max(dev, std::abs(D.xy - c.D.xy));
  dev = std::max(dev, std::abs(D.xz - c.D.xz));
  dev = std::max(dev, std::abs(D.yz - c.D.yz));
  return dev;
}

// Group ordered site pairs by displacement and verify each class carries one
// coupling value and visits every site once.
std::vector<DispClass> displacement_classes(const CouplingTable& table, const LatticeSpec& lat,
                                            int sample_i, int sample_j) {
  const int n = lat.n_per_sample;
  const int base_i = sample_i * n, base_j = sample_j * n;
  std::map<Key, DispClass> classes;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      int i = base_i + a, j = base_j + b;
      if (i == j) continue;
      Vec3 rho = lat.displacement(i, j);
      auto [it, fresh] = classes.emplace(
          quantize(rho), DispClass{rho, table.J(i, j), table.D(i, j), 0, i, j});
      it->second.count++;
      if (!fresh && coupling_spread(table, i, j, it->second) > kClassTol)
        throw std::invalid_argument(
            "fourier: couplings are not translation invariant; pair (" + std::to_string(i) + "," +
            std::to_string(j) + ") deviates from pair (" + std::to_string(it->second.ref_i) + "," +
            std::to_string(it->second.ref_j) + ")");
    }
  }
  std::vector<DispClass> out;
  out.reserve(classes.size());
  for (auto& [key, c] : classes) {
    if (c.count != n)
      throw std::invalid_argument(
          "fourier: couplings are not translation invariant; displacement class of pair (" +
          std::to_string(c.ref_i) + "," + std::to_string(c.ref_j) + ") visits " +
          std::to_string(c.count) + " of " + std::to_string(n) + " sites");
    out.push_back(c);
  }
  return out;
}

TransformValue class_sum(const std::vector<DispClass>& classes, const Vec3& k) {
  TransformValue v;
  for (const auto& c : classes) {
    cplx phase = std::exp(cplx(0.0, -k.dot(c.rho)));
    v.J += c.J * phase;
    const double comp[6] = {c.D.xx, c.D.yy, c.D.zz, c.D.xy, c.D.xz, c.D.yz};
    for (int q = 0; q < 6; ++q) v.D[q] += comp[q] * phase;
  }
  return v;
}

KGrid kgrid_of(const LatticeSpec& lat) {
  if (!lat.grid)
    throw std::invalid_argument("fourier: reciprocal grid requires a generated periodic geometry");
  return KGrid{lat.grid->dims, lat.grid->spacing};
}

FourierTable build_table(const CouplingTable& table, const LatticeSpec& lat, bool parallel) {
  lat.validate();
  FourierTable ft;
  ft.grid = kgrid_of(lat);
  const int M = ft.grid.size();

  for (int m = 0; m < 2; ++m) {
    auto classes = displacement_classes(table, lat, m, m);
    ft.J_intra[m].resize(M);
    for (int q = 0; q < 6; ++q) ft.D_intra[m][q].resize(M);
#pragma omp parallel for schedule(static) if (parallel)
    for (int a = 0; a < M; ++a) {
      TransformValue v = class_sum(classes, ft.grid.k(a));
      ft.J_intra[m](a) = v.J;
      for (int q = 0; q < 6; ++q) ft.D_intra[m][q](a) = v.D[q];
    }
  }

  bool invariant = true;
  std::vector<DispClass> cross_classes;
  try {
    cross_classes = displacement_classes(table, lat, 0, 1);
  } catch (const std::invalid_argument&) {
    invariant = false;
  }
  ft.cross_invariant = invariant;
  if (invariant) {
    ft.J_cross_diag.resize(M);
    for (int q = 0; q < 6; ++q) ft.D_cross_diag[q].resize(M);
#pragma omp parallel for schedule(static) if (parallel)
    for (int b = 0; b < M; ++b) {
      TransformValue v = class_sum(cross_classes, ft.grid.k(b));
      ft.J_cross_diag(b) = v.J;
      for (int q = 0; q < 6; ++q) ft.D_cross_diag[q](b) = v.D[q];
    }
  } else {
    if (M > 256)
      throw std::invalid_argument(
          "fourier: cross couplings are not translation invariant and the lattice is too large "
          "for the literal double transform");
    ft.J_cross_full.resize(M, M);
    for (int q = 0; q < 6; ++q) ft.D_cross_full[q].resize(M, M);
#pragma omp parallel for collapse(2) schedule(static) if (parallel)
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) {
        TransformValue v = cross_transform(table, lat, ft.grid.k(a), ft.grid.k(b));
        ft.J_cross_full(a, b) = v.J;
        for (int q = 0; q < 6; ++q) ft.D_cross_full[q](a, b) = v.D[q];
      }
  }
  return ft;
}

}  // namespace

TransformValue intra_transform(const CouplingTable& table, const LatticeSpec& lat, int sample,
                               const Vec3& k) {
  if (sample < 0 || sample > 1) throw std::invalid_argument("fourier: sample must be 0 or 1");
  auto classes = displacement_classes(table, lat, sample, sample);
  return class_sum(classes, k);
}

TransformValue cross_transform(const CouplingTable& table, const LatticeSpec& lat, const Vec3& k1,
                               const Vec3& k2) {
  const int n = lat.n_per_sample;
  TransformValue v;
  for (int a = 0; a < n; ++a) {
    cplx p1 = std::exp(cplx(0.0, -k1.dot(lat.position[a])));
    for (int b = 0; b < n; ++b) {
      int j = n + b;
      cplx phase = p1 * std::exp(cplx(0.0, -k2.dot(lat.position[j])));
      v.J += table.J(a, j) * phase;
      const SymTensor& D = table.D(a, j);
      const double comp[6] = {D.xx, D.yy, D.zz, D.xy, D.xz, D.yz};
      for (int q = 0; q < 6; ++q) v.D[q] += comp[q] * phase;
    }
  }
  v.J /= (double)n;
  for (int q = 0; q < 6; ++q) v.D[q] /= (double)n;
  return v;
}

void FourierTable::check_k(int k, const char* what) const {
  if (k < 0 || k >= grid.size())
    throw std::invalid_argument(std::string("fourier table: no entry for k index ") +
                                std::to_string(k) + " in component " + what);
}

cplx FourierTable::j_intra(int sample, int k) const {
  check_k(k, "J_intra");
  return J_intra[sample](k);
}

cplx FourierTable::d_intra(int sample, int comp, int k) const {
  check_k(k, "D_intra");
  return D_intra[sample][comp](k);
}

cplx FourierTable::j_cross(int k1, int k2) const {
  check_k(k1, "J_cross");
  check_k(k2, "J_cross");
  if (cross_invariant) return grid.add(k1, k2) == 0 ? J_cross_diag(k2) : cplx(0.0);
  return J_cross_full(k1, k2);
}

cplx FourierTable::d_cross(int comp, int k1, int k2) const {
  check_k(k1, "D_cross");
  check_k(k2, "D_cross");
  if (cross_invariant) return grid.add(k1, k2) == 0 ? D_cross_diag[comp](k2) : cplx(0.0);
  return D_cross_full[comp](k1, k2);
}

TransformValue FourierTable::intra(int sample, int k) const {
  TransformValue v;
  v.J = j_intra(sample, k);
  for (int q = 0; q < 6; ++q) v.D[q] = d_intra(sample, q, k);
  return v;
}

TransformValue FourierTable::cross(int k1, int k2) const {
  TransformValue v;
  v.J = j_cross(k1, k2);
  for (int q = 0; q < 6; ++q) v.D[q] = d_cross(q, k1, k2);
  return v;
}

FourierTable build_fourier_table(const CouplingTable& table, const LatticeSpec& lat) {
  return build_table(table, lat, true);
}

FourierTable build_fourier_table_serial(const CouplingTable& table, const LatticeSpec& lat) {
  return build_table(table, lat, false);
}

}  // namespace mbq

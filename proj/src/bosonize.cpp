#include "mbq/bosonize.hpp"

#include <cmath>
#include <stdexcept>

namespace mbq {

namespace {

constexpr double kPrune = 1e-14;

// Anisotropy weight of the double-raising channel: coefficient of S+_i S+_j
// inside sum_ab Phi^ab S^a_i S^b_j restricted to a,b in {x,y}.
cplx raising_channel(const SymTensor& D) {
  return cplx{(D.xx - D.yy) / 4.0, -D.xy / 2.0};
}

}  // namespace

HPExpansion hp_expand(const LatticeSpec& lat, const CouplingTable& table,
                      bool keep_nonconserving) {
  const int n = lat.n_sites();
  HPExpansion out;

  // Polarized reference energy: longitudinal pair part + Zeeman part.
  for (int i = 0; i < n; ++i)
    out.constant -= lat.field[lat.sample_of(i)] * lat.spin_of(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.constant -= table.longitudinal(i, j) * lat.spin_of(i) * lat.spin_of(j);

  // Quadratic diagonal: S_i (h_m + sum_j L_ij) over intra neighbours j.
  for (int i = 0; i < n; ++i) {
    const int m = lat.sample_of(i);
    const double Si = lat.spin_of(i);
    double neigh = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i && lat.sample_of(j) == m) neigh += table.longitudinal(i, j);
    out.conserving.add(Si * (lat.field[m] + neigh), {bdag(i), b(i)});
  }

  // Quadratic hopping: -sqrt(S_i S_j) T_ij (b+_i b_j + b+_j b_i), both intra
  // and cross pairs (intra has S_i = S_j).
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double t = table.transverse(i, j);
      if (t == 0.0) continue;
      const double amp = -std::sqrt(lat.spin_of(i) * lat.spin_of(j)) * t;
      out.conserving.add(amp, {bdag(i), b(j)});
      out.conserving.add(amp, {bdag(j), b(i)});
    }

  // Quartic conserving, per unordered pair:
  //   -L n_i n_j
  //   +(T/8)(b+i b+j bj bj + b+j b+j bj bi + ...)   [intra, equal spins]
  // Cross pairs carry the spin-ratio weights sqrt(S_j/S_i) on the side with
  // three i-operators.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double L = table.longitudinal(i, j);
      const double T = table.transverse(i, j);
      if (L != 0.0) out.conserving.add(-L, {bdag(i), bdag(j), b(i), b(j)});
      if (T != 0.0) {
        const double rij = std::sqrt(lat.spin_of(j) / lat.spin_of(i));  // weight of 3-i structures
        const double rji = std::sqrt(lat.spin_of(i) / lat.spin_of(j));
        out.conserving.add(T / 4.0 * rij, {bdag(i), bdag(j), b(i), b(i)});
        out.conserving.add(T / 4.0 * rij, {bdag(i), bdag(i), b(i), b(j)});
        out.conserving.add(T / 4.0 * rji, {bdag(j), bdag(j), b(j), b(i)});
        out.conserving.add(T / 4.0 * rji, {bdag(i), bdag(j), b(j), b(j)});
      }
    }
  out.conserving = out.conserving.normal_ordered(kPrune);

  if (keep_nonconserving) {
    BosonTermSum& nc = out.nonconserving;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const SymTensor& D = table.D(i, j);
        const double Si = lat.spin_of(i), Sj = lat.spin_of(j);
        const double zi = std::sqrt(2.0 * Si), zj = std::sqrt(2.0 * Sj);
        // Linear + cubic from the z-x / z-y channels.
        if (D.xz != 0.0 || D.yz != 0.0) {
          const cplx wmix{D.xz / 2.0, -D.yz / 2.0};  // coefficient of S+ partner
          // -(Phi_zx S^z_i S^x_j + Phi_zy S^z_i S^y_j) with S^z_i = S_i - n_i
          // and S^x_j, S^y_j expanded to cubic order; then i <-> j mirrored.
          auto emit = [&](int a, int bsite, double Sa, double zb, double Sb) {
            // linear: -S_a z_b (w b_b + w* b+_b)
            nc.add(-Sa * zb * wmix, {b(bsite)});
            nc.add(-Sa * zb * std::conj(wmix), {bdag(bsite)});
            // cubic, source 1: +n_a z_b (w b_b + w* b+_b)
            nc.add(zb * wmix, {bdag(a), b(a), b(bsite)});
            nc.add(zb * std::conj(wmix), {bdag(a), b(a), bdag(bsite)});
            // cubic, source 2: ladder corrections of the b-site operators,
            // +S_a z_b/(4 S_b) (w b+_b b_b b_b + w* b+_b b+_b b_b)
            nc.add(Sa * zb / (4.0 * Sb) * wmix, {bdag(bsite), b(bsite), b(bsite)});
            nc.add(Sa * zb / (4.0 * Sb) * std::conj(wmix), {bdag(bsite), bdag(bsite), b(bsite)});
          };
          emit(i, j, Si, zj, Sj);
          emit(j, i, Sj, zi, Si);
        }
        // Pair creation/annihilation + quartic from the double-raising channel.
        const cplx beta = raising_channel(D);
        if (beta != cplx{0.0, 0.0}) {
          const double g = 2.0 * std::sqrt(Si * Sj);
          nc.add(-g * beta, {b(i), b(j)});
          nc.add(-g * std::conj(beta), {bdag(i), bdag(j)});
          // quartic ladder corrections of the same channel
          const double ci = 0.5 * std::sqrt(Sj / Si);  // weight of b+_i b_i b_i b_j
          const double cj = 0.5 * std::sqrt(Si / Sj);
          nc.add(ci * beta, {bdag(i), b(i), b(i), b(j)});
          nc.add(cj * beta, {bdag(j), b(i), b(j), b(j)});
          nc.add(ci * std::conj(beta), {bdag(i), bdag(i), bdag(j), b(i)});
          nc.add(cj * std::conj(beta), {bdag(j), bdag(j), bdag(i), b(j)});
        }
      }
    out.nonconserving = nc.normal_ordered(kPrune);
  }
  return out;
}

int KSpaceHamiltonian::mode_id(int sample, int k_index) const {
  const auto& set = k_set[sample];
  for (int i = 0; i < (int)set.size(); ++i)
    if (set[i] == k_index) return sample == 0 ? i : (int)k_set[0].size() + i;
  return -1;
}

std::pair<int, int> KSpaceHamiltonian::mode_label(int mode) const {
  const int n0 = (int)k_set[0].size();
  if (mode < n0) return {0, k_set[0][mode]};
  return {1, k_set[1][mode - n0]};
}

KSpaceHamiltonian kspace_coefficients(const FourierTable& tf, const LatticeSpec& lat,
                                      std::vector<int> k_set1, std::vector<int> k_set2) {
  KSpaceHamiltonian out;
  out.grid = tf.grid;
  out.k_set[0] = std::move(k_set1);
  out.k_set[1] = std::move(k_set2);
  const auto& g = out.grid;
  const double N = (double)lat.n_per_sample;
  const double S1 = lat.spin[0], S2 = lat.spin[1];
  const std::array<double, 2> S{S1, S2};

  auto real_checked = [](cplx v, const char* what) {
    if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v)))
      throw std::runtime_error(std::string("expected real transform value for ") + what);
    return v.real();
  };

  // Quadratic intra diagonal: S_m (h_m + L_m(0) - T_m(k)).
  for (int m = 0; m < 2; ++m) {
    const double L0 = real_checked(tf.intra(m, 0).longitudinal(), "intra L(0)");
    for (int idx : out.k_set[m]) {
      const double Tk = real_checked(tf.intra(m, idx).transverse(), "intra T(k)");
      out.A_intra.push_back(S[m] * (lat.field[m] + L0 - Tk));
    }
  }
  for (int mode = 0; mode < out.n_modes(); ++mode)
    out.terms.add(out.A_intra[mode], {bdag(mode), b(mode)});

  // Quadratic cross: -sqrt(S1 S2) Tc(k1, -k2) b+_{1,k1} b_{2,k2} + h.c.
  out.A_cross.resize((Eigen::Index)out.k_set[0].size(), (Eigen::Index)out.k_set[1].size());
  for (int a = 0; a < (int)out.k_set[0].size(); ++a)
    for (int c = 0; c < (int)out.k_set[1].size(); ++c) {
      const int k1 = out.k_set[0][a], k2 = out.k_set[1][c];
      const cplx amp = -std::sqrt(S1 * S2) * tf.cross(k1, g.neg(k2)).transverse();
      out.A_cross(a, c) = amp;
      const int m1 = a, m2 = (int)out.k_set[0].size() + c;
      out.terms.add(amp, {bdag(m1), b(m2)});
      out.terms.add(std::conj(amp), {bdag(m2), b(m1)});
    }

  // Quartic intra, per sample: for ordered (a,b;c,d) with k_a+k_b = k_c+k_d,
  //   [ (T(k_b)+T(k_d)+T(-k_d)+T(-k_a))/(8N) - L(k_b - k_d)/(2N) ] b+a b+b bc bd
  for (int m = 0; m < 2; ++m) {
    const auto& set = out.k_set[m];
    for (int a : set)
      for (int bket : set)
        for (int c : set)
          for (int d : set) {
            if (g.add(a, bket) != g.add(c, d)) continue;
            const cplx tpart = tf.intra(m, bket).transverse() + tf.intra(m, d).transverse() +
                               tf.intra(m, g.neg(d)).transverse() +
                               tf.intra(m, g.neg(a)).transverse();
            const cplx lpart = tf.intra(m, g.sub(bket, d)).longitudinal();
            const cplx coeff = tpart / (8.0 * N) - lpart / (2.0 * N);
            if (std::abs(coeff) < kPrune) continue;
            out.terms.add(coeff, {bdag(out.mode_id(m, a)), bdag(out.mode_id(m, bket)),
                                  b(out.mode_id(m, c)), b(out.mode_id(m, d))});
          }
  }

  const auto& set1 = out.k_set[0];
  const auto& set2 = out.k_set[1];
  auto Tc = [&](int kk1, int kk2) { return tf.cross(kk1, kk2).transverse(); };
  auto Lc = [&](int kk1, int kk2) { return tf.cross(kk1, kk2).longitudinal(); };

  // Cross density-density: -(1/N) Lc(k1-k1', k2-k2') b+_{1,k1} b+_{2,k2} b_{1,k1'} b_{2,k2'}
  for (int k1 : set1)
    for (int k2 : set2)
      for (int k1p : set1)
        for (int k2p : set2) {
          const cplx coeff = -Lc(g.sub(k1, k1p), g.sub(k2, k2p)) / N;
          if (std::abs(coeff) < kPrune) continue;
          out.terms.add(coeff, {bdag(out.mode_id(0, k1)), bdag(out.mode_id(1, k2)),
                                b(out.mode_id(0, k1p)), b(out.mode_id(1, k2p))});
        }

  // Cross three-one structures, weight sqrt(S_other/S_heavy)/(4N).
  const double w1 = std::sqrt(S2 / S1) / (4.0 * N);  // three operators in sample 1
  const double w2 = std::sqrt(S1 / S2) / (4.0 * N);  // three operators in sample 2
  for (int a : set1)
    for (int c : set1)
      for (int d : set1) {
        for (int k2 : set2) {
          // b+_{1,a} b+_{2,k2} b_{1,c} b_{1,d} : Tc(k_a - k_c - k_d, k2)
          cplx coeff = w1 * Tc(g.sub(g.sub(a, c), d), k2);
          if (std::abs(coeff) >= kPrune)
            out.terms.add(coeff, {bdag(out.mode_id(0, a)), bdag(out.mode_id(1, k2)),
                                  b(out.mode_id(0, c)), b(out.mode_id(0, d))});
          // b+_{1,a} b+_{1,c} b_{1,d} b_{2,k2} : Tc(k_a + k_c - k_d, -k2)
          coeff = w1 * Tc(g.sub(g.add(a, c), d), g.neg(k2));
          if (std::abs(coeff) >= kPrune)
            out.terms.add(coeff, {bdag(out.mode_id(0, a)), bdag(out.mode_id(0, c)),
                                  b(out.mode_id(0, d)), b(out.mode_id(1, k2))});
        }
      }
  for (int a : set2)
    for (int c : set2)
      for (int d : set2) {
        for (int k1 : set1) {
          // b+_{1,k1} b+_{2,a} b_{2,c} b_{2,d} : Tc(k1, k_a - k_c - k_d)
          cplx coeff = w2 * Tc(k1, g.sub(g.sub(a, c), d));
          if (std::abs(coeff) >= kPrune)
            out.terms.add(coeff, {bdag(out.mode_id(1, a)), bdag(out.mode_id(0, k1)),
                                  b(out.mode_id(1, c)), b(out.mode_id(1, d))});
          // b+_{2,a} b+_{2,c} b_{2,d} b_{1,k1} : Tc(-k1, k_a + k_c - k_d)
          coeff = w2 * Tc(g.neg(k1), g.sub(g.add(a, c), d));
          if (std::abs(coeff) >= kPrune)
            out.terms.add(coeff, {bdag(out.mode_id(1, a)), bdag(out.mode_id(1, c)),
                                  b(out.mode_id(1, d)), b(out.mode_id(0, k1))});
        }
      }

  out.terms = out.terms.normal_ordered(kPrune);
  if (!out.terms.number_conserving())
    throw std::runtime_error("kspace_coefficients produced a non-conserving term");
  return out;
}

BosonTermSum to_kspace(const BosonTermSum& site_terms, const LatticeSpec& lat,
                       const KSpaceHamiltonian& ksp) {
  const int N = lat.n_per_sample;
  if ((int)ksp.k_set[0].size() != N || (int)ksp.k_set[1].size() != N)
    throw std::invalid_argument("to_kspace requires full-grid mode sets");
  const double norm = 1.0 / std::sqrt((double)N);
  // Precompute per-site expansions.
  std::vector<std::vector<std::pair<cplx, int>>> expn(lat.n_sites());
  for (int i = 0; i < lat.n_sites(); ++i) {
    const int m = lat.sample_of(i);
    const Vec3 r = lat.position[i];
    for (int idx : ksp.k_set[m]) {
      const Vec3 k = ksp.grid.k(idx);
      expn[i].push_back({norm * std::exp(cplx{0.0, k.dot(r)}), ksp.mode_id(m, idx)});
    }
  }
  BosonTermSum shifted = site_terms.substituted(
      [&](int site) -> const std::vector<std::pair<cplx, int>>& { return expn[site]; });
  return shifted.normal_ordered(kPrune);
}

}  // namespace mbq

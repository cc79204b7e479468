#include "mbq/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mbq {

namespace {

double real_part(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v)))
    throw std::runtime_error(std::string("expected a real lattice sum for ") + what);
  return v.real();
}

}  // namespace

QubitParams params_from_condensate_sums(const CondensateSums& s) {
  QubitParams p;
  const double N = (double)s.n;
  for (int m = 0; m < 2; ++m) {
    const double drop = s.L0(m) - s.Tk(m);  // J0 + Dzz0 - Jk - Dtk
    p.E[m] = (s.spin[m] + 0.5 / N) * drop + s.spin[m] * s.field[m];
    p.lambda[m] = -drop / (2.0 * N);
  }
  if (p.lambda[0] * p.lambda[1] < 0.0)
    throw std::runtime_error(
        "self-anharmonicities have opposite signs: synchronism is impossible for "
        "this configuration");
  p.lambda12 = s.cross_L00 / N;
  p.kappa = -std::sqrt(s.spin[0] * s.spin[1]) * s.cross_T;
  p.kappa_prime = s.cross_T00 / (4.0 * N);
  p.src = s;
  return p;
}

CondensateSums condensate_sums(const FourierTable& tf, const LatticeSpec& lat,
                               int k1_index, int k2_index) {
  CondensateSums s;
  s.n = lat.n_per_sample;
  s.spin = lat.spin;
  s.field = lat.field;
  s.k_index = {k1_index, k2_index};
  const std::array<int, 2> kk{k1_index, k2_index};
  for (int m = 0; m < 2; ++m) {
    const TransformValue v0 = tf.intra(m, 0);
    const TransformValue vk = tf.intra(m, kk[m]);
    s.J0[m] = real_part(v0.J, "intra J(0)");
    s.Dt0[m] = real_part((v0.D[0] + v0.D[1]) / 2.0, "intra Dt(0)");
    s.Dzz0[m] = real_part(v0.D[2], "intra Dzz(0)");
    s.Jk[m] = real_part(vk.J, "intra J(k)");
    s.Dtk[m] = real_part((vk.D[0] + vk.D[1]) / 2.0, "intra Dt(k)");
  }
  s.cross_T = tf.cross(k1_index, tf.grid.neg(k2_index)).transverse();
  const TransformValue c00 = tf.cross(0, 0);
  s.cross_T00 = real_part(c00.transverse(), "cross T(0,0)");
  s.cross_L00 = real_part(c00.longitudinal(), "cross L(0,0)");
  return s;
}

CondensateSums condensate_sums_continuous(const CouplingTable& table, const LatticeSpec& lat,
                                          const Vec3& k1, const Vec3& k2) {
  CondensateSums s;
  s.n = lat.n_per_sample;
  s.spin = lat.spin;
  s.field = lat.field;
  s.k_index = {-1, -1};
  const std::array<Vec3, 2> kk{k1, k2};
  const Vec3 zero = Vec3::Zero();
  for (int m = 0; m < 2; ++m) {
    const TransformValue v0 = intra_transform(table, lat, m, zero);
    const TransformValue vk = intra_transform(table, lat, m, kk[m]);
    s.J0[m] = real_part(v0.J, "intra J(0)");
    s.Dt0[m] = real_part((v0.D[0] + v0.D[1]) / 2.0, "intra Dt(0)");
    s.Dzz0[m] = real_part(v0.D[2], "intra Dzz(0)");
    s.Jk[m] = real_part(vk.J, "intra J(k)");
    s.Dtk[m] = real_part((vk.D[0] + vk.D[1]) / 2.0, "intra Dt(k)");
  }
  s.cross_T = cross_transform(table, lat, k1, -k2).transverse();
  const TransformValue c00 = cross_transform(table, lat, zero, zero);
  s.cross_T00 = real_part(c00.transverse(), "cross T(0,0)");
  s.cross_L00 = real_part(c00.longitudinal(), "cross L(0,0)");
  return s;
}

QubitParams basic_params(const FourierTable& tf, const LatticeSpec& lat) {
  return params_from_condensate_sums(condensate_sums(tf, lat, 0, 0));
}

QubitParams double_well_params(const FourierTable& tf, const LatticeSpec& lat,
                               int k1_index, int k2_index) {
  return params_from_condensate_sums(condensate_sums(tf, lat, k1_index, k2_index));
}

double sync_residual(const QubitParams& p, SyncForm form) {
  const CondensateSums& s = p.src;
  auto require_equal_samples = [&]() {
    const double scale = std::max({1.0, std::abs(s.T0(0)), std::abs(s.L0(0))});
    if (std::abs(s.T0(0) - s.T0(1)) > 1e-9 * scale ||
        std::abs(s.L0(0) - s.L0(1)) > 1e-9 * scale ||
        std::abs(s.Tk(0) - s.Tk(1)) > 1e-9 * scale)
      throw std::runtime_error("this residual form requires identical samples");
  };
  const double cross00 = s.cross_T00;  // equals cross L(0,0) when the bond is isotropic
  switch (form) {
    case SyncForm::generic: {
      const double prod = p.lambda[0] * p.lambda[1];
      if (prod < 0.0) throw std::runtime_error("lambda1 lambda2 < 0 in generic residual");
      return p.lambda12 - 2.0 * std::sqrt(prod);
    }
    case SyncForm::equal_zero_k:
      require_equal_samples();
      return s.T0(0) - s.L0(0) - cross00;
    case SyncForm::zero_transverse:
      return s.J0[0] + s.Dt0[0];
    case SyncForm::finite_k: {
      const double d1 = s.Tk(0) - s.L0(0);
      const double d2 = s.Tk(1) - s.L0(1);
      if (d1 * d2 < 0.0)
        throw std::runtime_error("negative radicand in finite-k residual");
      return cross00 - std::sqrt(d1 * d2);
    }
    case SyncForm::equal_finite_k:
      require_equal_samples();
      return s.Tk(0) - s.L0(0) - cross00;
  }
  throw std::logic_error("unknown residual form");
}

double sync_residual_bond(double T1k, double L10, double T2k, double L20,
                          double j12_plus_d12zz) {
  const double d1 = T1k - L10, d2 = T2k - L20;
  if (d1 * d2 < 0.0) throw std::runtime_error("negative radicand in bond residual");
  return std::sqrt(d1 * d2) - j12_plus_d12zz;
}

double sync_residual_bond_equal(double Tk, double L0, double j12_plus_d12zz) {
  return Tk - L0 - j12_plus_d12zz;
}

std::vector<RootResult> solve_synchronism(const std::function<double(double)>& f,
                                          double lo, double hi, int scan_points,
                                          double tol) {
  if (!(hi > lo)) throw std::invalid_argument("solve_synchronism: empty interval");
  if (scan_points < 2) throw std::invalid_argument("solve_synchronism: need >= 2 scan points");
  (void)tol;  // roots are bisected to machine width; tol is advisory for callers
  std::vector<ScanPoint> scan;
  scan.reserve(scan_points + 1);
  for (int i = 0; i <= scan_points; ++i) {
    const double x = lo + (hi - lo) * (double)i / (double)scan_points;
    try {
      scan.push_back({x, f(x)});
    } catch (const std::exception&) {
      // undefined node (e.g. negative radicand); treated as a gap in the scan
    }
  }
  std::vector<RootResult> roots;
  auto push_root = [&](double x, double fx) {
    for (const RootResult& r : roots)
      if (std::abs(r.x - x) <= 1e-12 * std::max(1.0, std::abs(x))) return;
    roots.push_back({x, fx});
  };
  for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
    const ScanPoint a = scan[i], bnode = scan[i + 1];
    if (a.f == 0.0) push_root(a.x, 0.0);
    if (a.f * bnode.f < 0.0) {
      double xl = a.x, xr = bnode.x, fl = a.f;
      for (int it = 0; it < 200; ++it) {
        const double xm = 0.5 * (xl + xr);
        if (xm == xl || xm == xr) break;
        double fm;
        try {
          fm = f(xm);
        } catch (const std::exception&) {
          break;
        }
        if (fm == 0.0) {
          xl = xr = xm;
          fl = 0.0;
          break;
        }
        if (fl * fm < 0.0) {
          xr = xm;
        } else {
          xl = xm;
          fl = fm;
        }
        if (std::abs(xr - xl) <= 1e-15 * std::max(1.0, std::abs(xm))) break;
      }
      const double xroot = 0.5 * (xl + xr);
      double fres;
      try {
        fres = f(xroot);
      } catch (const std::exception&) {
        fres = std::numeric_limits<double>::quiet_NaN();
      }
      if (std::isfinite(fres))
        push_root(xroot, fres);  // bisected to machine width; caller sees the residual
    }
  }
  if (!scan.empty() && scan.back().f == 0.0) push_root(scan.back().x, 0.0);
  if (roots.empty())
    throw NoRootError("no sign change of the synchronism residual in the scanned interval",
                      std::move(scan));
  std::sort(roots.begin(), roots.end(),
            [](const RootResult& a, const RootResult& r) { return a.x < r.x; });
  return roots;
}

double SquareForm::evaluate(double n1, double n2) const {
  const double m = m2 * n2 - m1 * n1;
  const double sq = std::sqrt(lambda_m) * m + shift_m;
  return sq * sq + nt_coeff * (n1 + n2) + constant;
}

SquareForm square_form(const QubitParams& p) {
  if (!(p.lambda[0] > 0.0) || !(p.lambda[1] > 0.0))
    throw std::runtime_error("square form requires positive self-anharmonicities");
  const double res = sync_residual(p, SyncForm::generic);
  if (std::abs(res) > 1e-10)
    throw std::runtime_error("square form requires the synchronism condition to hold");
  SquareForm q;
  const double r1 = std::sqrt(p.lambda[0]), r2 = std::sqrt(p.lambda[1]);
  q.lambda_m = p.lambda12 / 2.0;
  q.m1 = std::sqrt(2.0 * p.lambda[0] / p.lambda12);
  q.m2 = std::sqrt(2.0 * p.lambda[1] / p.lambda12);
  q.shift_m = (p.E[1] - p.E[0]) / (2.0 * (r2 + r1));
  q.nt_coeff = (r2 * p.E[0] + r1 * p.E[1]) / (r2 + r1);
  q.constant = -(p.E[1] - p.E[0]) * (p.E[1] - p.E[0]) / (4.0 * (r2 + r1) * (r2 + r1));
  return q;
}

SymmetricQubit symmetric_qubit(const QubitParams& p) {
  const double scale = std::max({1.0, std::abs(p.lambda[0]), std::abs(p.lambda[1])});
  if (std::abs(p.lambda[0] - p.lambda[1]) > 1e-9 * scale)
    throw std::runtime_error("symmetric form requires equal self-anharmonicities");
  if (!(p.lambda[0] > 0.0))
    throw std::runtime_error("symmetric form requires positive self-anharmonicity");
  // No gate on the matching condition: the charge-offset readout is defined
  // whenever the anharmonicities agree, and is exact once the condition holds.
  SymmetricQubit q;
  q.lambda = 0.5 * (p.lambda[0] + p.lambda[1]);
  q.n_g = (p.E[1] - p.E[0]) / (4.0 * q.lambda);
  q.nt_coeff = 0.5 * (p.E[0] + p.E[1]);
  q.constant = -q.lambda * q.n_g * q.n_g;
  q.alt_ng_per_nt = (p.E[1] != p.E[0])
                        ? 2.0 * (p.E[0] + p.E[1]) / (p.E[1] - p.E[0])
                        : std::numeric_limits<double>::quiet_NaN();
  return q;
}

double secular_energy(const QubitParams& p, double n1, double n2) {
  return p.E[0] * n1 + p.E[1] * n2 + p.lambda[0] * n1 * n1 + p.lambda[1] * n2 * n2 -
         p.lambda12 * n1 * n2;
}

QubitPair select_qubit_pair(const QubitParams& p, long n_t) {
  if (n_t < 1) throw std::invalid_argument("pair selection needs n_t >= 1");
  long best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (long n1 = 0; n1 < n_t; ++n1) {
    const long n2 = n_t - n1;
    const double cost =
        secular_energy(p, (double)n1, (double)n2) +
        secular_energy(p, (double)(n1 + 1), (double)(n2 - 1));
    if (cost < best_cost) {
      best_cost = cost;
      best = n1;
    }
  }
  return {best, n_t - best};
}

cplx pair_coupling(const QubitParams& p, long n_t) {
  return p.kappa + p.kappa_prime * (double)(n_t - 1);
}

KReport pair_coupling_report(const QubitParams& p, long n_t) {
  KReport r;
  r.composed = pair_coupling(p, n_t);
  const double N = (double)p.src.n;
  const cplx bare = p.src.cross_T;  // kappa = -sqrt(S1 S2) * bare
  const double s12 = std::sqrt(p.src.spin[0] * p.src.spin[1]);
  // Single-shot closed form carrying one more 1/N than the composed value;
  // evaluated with the zero-wavevector cross sum for its density-assisted part.
  r.alt_normalized = ((double)(n_t - 1) / (4.0 * N) * p.src.cross_T00 - s12 * bare) / N;
  r.discrepancy = std::abs(r.composed - r.alt_normalized);
  return r;
}

BosonTermSum qubit_terms(const QubitParams& p) {
  BosonTermSum h;
  h.add(p.E[0], {bdag(0), b(0)});
  h.add(p.E[1], {bdag(1), b(1)});
  h.add(p.lambda[0], {bdag(0), b(0), bdag(0), b(0)});
  h.add(p.lambda[1], {bdag(1), b(1), bdag(1), b(1)});
  h.add(-p.lambda12, {bdag(0), b(0), bdag(1), b(1)});
  if (p.kappa != cplx{0.0, 0.0}) {
    h.add(p.kappa, {bdag(0), b(1)});
    h.add(std::conj(p.kappa), {bdag(1), b(0)});
  }
  if (p.kappa_prime != 0.0) {
    h.add(p.kappa_prime, {bdag(0), bdag(1), b(1), b(1)});
    h.add(p.kappa_prime, {bdag(0), bdag(0), b(0), b(1)});
    h.add(p.kappa_prime, {bdag(1), bdag(1), b(1), b(0)});
    h.add(p.kappa_prime, {bdag(0), bdag(1), b(0), b(0)});
  }
  return h.normal_ordered();
}

}  // namespace mbq

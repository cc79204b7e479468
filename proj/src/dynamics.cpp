#include "mbq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mbq {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_inputs(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0) {
  if (h.rows() != h.cols()) throw std::invalid_argument("propagate: matrix not square");
  if (psi0.size() != h.rows())
    throw std::invalid_argument("propagate: state dimension mismatch");
  if (psi0.norm() < 1e-12)
    throw std::invalid_argument("propagate: zero-norm initial state");
  if (hermiticity_residual(h) > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("propagate: matrix is not Hermitian");
}

// One Krylov step psi -> exp(-i h dt) psi via a Lanczos basis with full
// reorthogonalization. Exactly norm preserving.
Eigen::VectorXcd krylov_step(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi,
                             double dt, int m) {
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return psi;
  const Eigen::Index dim = psi.size();
  m = (int)std::min<Eigen::Index>(m, dim);
  Eigen::MatrixXcd V(dim, m);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  V.col(0) = psi / beta0;
  int used = m;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd w = h * V.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        const cplx c = V.col(i).dot(w);
        if (pass == 0 && i == j) alpha(j) += c.real();
        w -= c * V.col(i);
      }
    const double nb = w.norm();
    if (j + 1 < m) {
      if (nb < 1e-13 * std::max(1.0, beta0)) {
        used = j + 1;
        break;
      }
      beta(j) = nb;
      V.col(j + 1) = w / nb;
    }
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
  for (int j = 0; j < used; ++j) {
    T(j, j) = alpha(j);
    if (j + 1 < used) T(j, j + 1) = T(j + 1, j) = beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Eigen::VectorXcd phases(used);
  for (int j = 0; j < used; ++j)
    phases(j) = std::exp(cplx{0.0, -es.eigenvalues()(j) * dt});
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(used);
  e1(0) = 1.0;
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * e1;
  Eigen::VectorXcd y(used);
  for (int j = 0; j < used; ++j) y(j) = phases(j) * proj(j);
  const Eigen::VectorXcd z = es.eigenvectors() * y;
  return beta0 * (V.leftCols(used) * z);
}

}  // namespace

double spectral_bound(const Eigen::MatrixXcd& h) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    best = std::max(best, h.row(r).cwiseAbs().sum());
  return best;
}

Trajectory propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                     const PropagateOptions& opt) {
  check_inputs(h, psi0);
  if (!(opt.t_end >= 0.0)) throw std::invalid_argument("propagate: negative time span");
  if (opt.n_samples < 1) throw std::invalid_argument("propagate: need >= 1 samples");
  const Eigen::Index dim = h.rows();
  Propagator method = opt.method;
  if (method == Propagator::automatic)
    method = dim <= 2000 ? Propagator::spectral : Propagator::krylov;

  Trajectory traj;
  traj.times.resize(opt.n_samples + 1);
  for (int i = 0; i <= opt.n_samples; ++i)
    traj.times[i] = opt.t_end * (double)i / (double)opt.n_samples;
  traj.states.resize(dim, opt.n_samples + 1);

  if (method == Propagator::spectral) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("propagate: eigendecomposition failed");
    const Eigen::VectorXcd c0 = es.eigenvectors().adjoint() * psi0;
    for (int i = 0; i <= opt.n_samples; ++i) {
      Eigen::VectorXcd c(dim);
      for (Eigen::Index j = 0; j < dim; ++j)
        c(j) = std::exp(cplx{0.0, -es.eigenvalues()(j) * traj.times[i]}) * c0(j);
      traj.states.col(i) = es.eigenvectors() * c;
    }
  } else {
    const double bound = spectral_bound(h);
    double dt = bound > 0.0 ? 1.0 / (50.0 * bound) : opt.t_end;
    if (opt.dt_max > 0.0) dt = std::min(dt, opt.dt_max);
    Eigen::VectorXcd psi = psi0;
    traj.states.col(0) = psi;
    for (int i = 1; i <= opt.n_samples; ++i) {
      double remaining = traj.times[i] - traj.times[i - 1];
      while (remaining > 0.0) {
        const double step = std::min(dt, remaining);
        psi = krylov_step(h, psi, step, opt.krylov_dim);
        remaining -= step;
      }
      traj.states.col(i) = psi;
    }
  }

  traj.norm.resize(opt.n_samples + 1);
  traj.energy.resize(opt.n_samples + 1);
  for (int i = 0; i <= opt.n_samples; ++i) {
    const Eigen::VectorXcd psi = traj.states.col(i);
    traj.norm[i] = psi.norm();
    traj.energy[i] = (psi.dot(h * psi)).real();
    traj.norm_drift = std::max(traj.norm_drift, std::abs(traj.norm[i] - 1.0));
  }
  const double e0 = traj.energy[0];
  for (double e : traj.energy)
    traj.energy_drift =
        std::max(traj.energy_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
  return traj;
}

TwoLevelModel two_level(const QubitParams& p, QubitPair pair) {
  if (pair.n2 < 1) throw std::invalid_argument("two_level: pair needs n2 >= 1");
  TwoLevelModel m;
  const cplx K = pair_coupling(p, pair.n1 + pair.n2);
  m.g = std::abs(K) * std::sqrt((double)(pair.n1 + 1) * (double)pair.n2);
  m.delta = secular_energy(p, (double)(pair.n1 + 1), (double)(pair.n2 - 1)) -
            secular_energy(p, (double)pair.n1, (double)pair.n2);
  m.omega = std::sqrt(4.0 * m.g * m.g + m.delta * m.delta);
  m.max_transfer = m.omega > 0.0 ? 4.0 * m.g * m.g / (m.omega * m.omega) : 0.0;
  m.t_first_max =
      m.omega > 0.0 ? kPi / m.omega : std::numeric_limits<double>::infinity();
  return m;
}

double TwoLevelModel::transfer_probability(double t) const {
  const double s = std::sin(0.5 * omega * t);
  return max_transfer * s * s;
}

long state_index(const FockSpace& space, long n1, long n2) {
  if (space.n_modes() != 2) throw std::invalid_argument("state_index: need a two-mode space");
  return space.index_of({(int)n1, (int)n2});
}

std::vector<double> leakage_series(const Trajectory& traj, const FockSpace& space,
                                   QubitPair pair) {
  const long lower = state_index(space, pair.n1, pair.n2);
  const long upper = state_index(space, pair.n1 + 1, pair.n2 - 1);
  if (lower < 0 || upper < 0)
    throw std::invalid_argument("leakage_series: pair states missing from the space");
  std::vector<double> out(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double kept = std::norm(traj.states(lower, (Eigen::Index)i)) +
                        std::norm(traj.states(upper, (Eigen::Index)i));
    const double total = traj.norm[i] * traj.norm[i];
    out[i] = total > 0.0 ? std::max(0.0, 1.0 - kept / total) : 0.0;
  }
  return out;
}

RabiMeasurement measure_rabi(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                             long target_index, double t_scan_end, int scan_points) {
  check_inputs(h, psi0);
  if (target_index < 0 || target_index >= h.rows())
    throw std::invalid_argument("measure_rabi: target index out of range");
  if (!(t_scan_end > 0.0) || scan_points < 8)
    throw std::invalid_argument("measure_rabi: bad scan window");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd c0 = es.eigenvectors().adjoint() * psi0;
  const Eigen::VectorXcd row = es.eigenvectors().row(target_index).conjugate();
  auto pop = [&](double t) {
    cplx amp{0.0, 0.0};
    for (Eigen::Index j = 0; j < c0.size(); ++j)
      amp += row(j) * std::exp(cplx{0.0, -es.eigenvalues()(j) * t}) * c0(j);
    return std::norm(amp);
  };

  RabiMeasurement out;
  const double dt = t_scan_end / (double)scan_points;
  double prev = pop(0.0), cur = pop(dt);
  int hit = -1;
  for (int i = 2; i <= scan_points; ++i) {
    const double next = pop(dt * (double)i);
    if (cur > prev && cur >= next) {
      hit = i - 1;
      break;
    }
    prev = cur;
    cur = next;
  }
  if (hit < 0) return out;  // flat or monotone: no oscillation found
  double t = dt * (double)hit, half = dt;
  for (int it = 0; it < 80 && half > 1e-16 * std::max(1.0, t); ++it) {
    const double fl = pop(t - half), fc = pop(t), fr = pop(t + half);
    const double denom = fl - 2.0 * fc + fr;
    double shift = 0.0;
    if (denom != 0.0) shift = 0.5 * half * (fl - fr) / denom;
    shift = std::clamp(shift, -half, half);
    const double cand = t + shift;
    if (pop(cand) >= fc) t = cand;
    half *= 0.5;
  }
  out.found = true;
  out.t_first_max = t;
  out.omega = kPi / t;
  out.peak_population = pop(t);
  return out;
}

LeakageSummary summarize_leakage(const std::vector<double>& series) {
  LeakageSummary s;
  if (series.empty()) return s;
  for (double v : series) s.max_leakage = std::max(s.max_leakage, v);
  s.final_leakage = series.back();
  return s;
}

std::vector<ScalingPoint> scaling_study(const QubitParams& p,
                                        const std::vector<QubitPair>& occupations) {
  std::vector<ScalingPoint> out;
  out.reserve(occupations.size());
  for (const QubitPair& pair : occupations) {
    if (pair.n2 < 1) throw std::invalid_argument("scaling_study: n2 must be >= 1");
    if (pair.n1 < 0) throw std::invalid_argument("scaling_study: n1 must be >= 0");
    const long n1 = pair.n1, n2 = pair.n2;
    const cplx K = pair_coupling(p, n1 + n2);
    ScalingPoint pt;
    pt.n1 = n1;
    pt.n2 = n2;
    pt.g_predicted = std::abs(K) * std::sqrt((double)(n1 + 1) * (double)n2);
    if (pt.g_predicted > 0.0) {
      // Pair-restricted space: the transfer is exactly two-level there.
      const FockSpace space = FockSpace::from_states(
          2, {{(int)n1, (int)n2}, {(int)(n1 + 1), (int)(n2 - 1)}});
      const Eigen::MatrixXcd h = build_fock_matrix(qubit_terms(p), space);
      Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
      psi0(space.index_of({(int)n1, (int)n2})) = 1.0;
      const long target = space.index_of({(int)(n1 + 1), (int)(n2 - 1)});
      const TwoLevelModel tl = two_level(p, pair);
      const double window = 1.25 * kPi / std::max(tl.omega, 2.0 * pt.g_predicted);
      const RabiMeasurement rm = measure_rabi(h, psi0, target, window, 4096);
      if (rm.found) {
        pt.found = true;
        pt.g_measured = 0.5 * rm.omega;
      }
    }
    out.push_back(pt);
  }
  std::stable_sort(out.begin(), out.end(), [](const ScalingPoint& a, const ScalingPoint& c) {
    return a.n1 + a.n2 < c.n1 + c.n2;
  });
  return out;
}

}  // namespace mbq

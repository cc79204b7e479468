// dynamics.hpp -- unitary time evolution on occupation-number spaces, the
// two-level reduction of a working pair, Rabi-frequency measurement and the
// transfer-amplitude scaling study.
#pragma once

#include <optional>
#include <vector>

#include "mbq/fock.hpp"
#include "mbq/qubit.hpp"

namespace mbq {

enum class Propagator { automatic, spectral, krylov };

struct PropagateOptions {
  double t_end = 1.0;
  int n_samples = 100;                   // output rows after t = 0
  Propagator method = Propagator::automatic;
  double dt_max = 0.0;                   // 0 -> derived from the spectral bound
  int krylov_dim = 30;
};

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXcd states;               // one column per sample time
  std::vector<double> norm;              // state norm per sample
  std::vector<double> energy;            // <psi|H|psi> per sample
  double norm_drift = 0.0;               // max |norm - 1|
  double energy_drift = 0.0;             // max |E(t) - E(0)| / max(1, |E(0)|)
};

Trajectory propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                     const PropagateOptions& opt);

// Upper bound on the spectral radius (row-sum norm); sets the default step.
double spectral_bound(const Eigen::MatrixXcd& h);

// Two-level reduction of the pair |n1,n2> <-> |n1+1,n2-1>.
struct TwoLevelModel {
  double g = 0.0;             // |K| sqrt((n1+1) n2)
  double delta = 0.0;         // secular energy difference, upper minus lower
  double omega = 0.0;         // sqrt(4 g^2 + delta^2): population oscillation frequency
  double max_transfer = 0.0;  // 4 g^2 / (4 g^2 + delta^2)
  double t_first_max = 0.0;   // pi / omega (infinity when omega = 0)

  // Analytic upper-state population max_transfer * sin^2(omega t / 2).
  double transfer_probability(double t) const;
};
TwoLevelModel two_level(const QubitParams& p, QubitPair pair);

// Occupation-basis helpers on a two-mode space.
long state_index(const FockSpace& space, long n1, long n2);
// Per-sample probability outside the two pair states.
std::vector<double> leakage_series(const Trajectory& traj, const FockSpace& space,
                                   QubitPair pair);
struct LeakageSummary {
  double max_leakage = 0.0;
  double final_leakage = 0.0;
};
LeakageSummary summarize_leakage(const std::vector<double>& series);

// Location of the first strict local maximum of |<target|psi(t)>|^2 under the
// spectrally exact evolution, refined by iterated parabolic interpolation.
struct RabiMeasurement {
  bool found = false;
  double t_first_max = 0.0;
  double omega = 0.0;         // pi / t_first_max
  double peak_population = 0.0;
};
RabiMeasurement measure_rabi(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0,
                             long target_index, double t_scan_end, int scan_points = 2048);

// Measured vs predicted transfer coupling across occupations, each pair
// evolved on its two-state restriction (exactly two-level, zero leakage).
// Output sorted by n_t = n1 + n2.
struct ScalingPoint {
  long n1 = 0, n2 = 0;
  double g_predicted = 0.0;   // |K(n1+n2)| sqrt((n1+1) n2)
  double g_measured = 0.0;    // half the measured population frequency; 0 if flat
  bool found = false;
};
std::vector<ScalingPoint> scaling_study(const QubitParams& p,
                                        const std::vector<QubitPair>& occupations);

}  // namespace mbq

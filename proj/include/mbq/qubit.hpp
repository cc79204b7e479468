// qubit.hpp -- reduction of the two-sample condensate pair to an anharmonic
// two-mode model: parameter extraction, synchronism residuals and root
// finding, the completed-square single-variable form, the symmetric-point
// charge-like form, working-pair selection and the pair-transfer coupling.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "mbq/bosonize.hpp"
#include "mbq/fourier.hpp"

namespace mbq {

// Lattice-sum ingredients evaluated at the condensate wavevectors.
// T = J + (Dxx+Dyy)/2 and L = J + Dzz as elsewhere; C denotes the cross
// transform between samples.
struct CondensateSums {
  int n = 0;                           // sites per sample
  std::array<double, 2> spin{}, field{};
  std::array<int, 2> k_index{};        // condensate grid index per sample
  std::array<double, 2> J0{}, Dt0{}, Dzz0{};   // intra at zero wavevector
  std::array<double, 2> Jk{}, Dtk{};           // intra at the condensate wavevector
  cplx cross_T{};                      // C transverse at (k1, -k2)
  double cross_T00 = 0.0;              // C transverse at (0, 0)
  double cross_L00 = 0.0;              // C longitudinal at (0, 0)

  double T0(int m) const { return J0[m] + Dt0[m]; }
  double L0(int m) const { return J0[m] + Dzz0[m]; }
  double Tk(int m) const { return Jk[m] + Dtk[m]; }
};

CondensateSums condensate_sums(const FourierTable& tf, const LatticeSpec& lat,
                               int k1_index, int k2_index);
// Continuous-wavevector variant via direct lattice sums (grid indices unset).
CondensateSums condensate_sums_continuous(const CouplingTable& table, const LatticeSpec& lat,
                                          const Vec3& k1, const Vec3& k2);

struct QubitParams {
  std::array<double, 2> E{};        // harmonic mode energies
  std::array<double, 2> lambda{};   // self-anharmonicity, + lambda n^2 each
  double lambda12 = 0.0;            // density-density coupling, - lambda12 n1 n2
  cplx kappa{};                     // single-transfer coupling
  double kappa_prime = 0.0;         // density-assisted transfer coupling
  CondensateSums src;
};

// Parameter extraction from either sums source.
QubitParams params_from_condensate_sums(const CondensateSums& s);

// Both samples condensed at zero wavevector.
QubitParams basic_params(const FourierTable& tf, const LatticeSpec& lat);
// Each sample condensed at its dispersion-minimum wavevector.
QubitParams double_well_params(const FourierTable& tf, const LatticeSpec& lat,
                               int k1_index, int k2_index);

// Residual forms whose zero locates the synchronism point. All are written
// LHS - RHS of the corresponding matching condition.
enum class SyncForm {
  generic,          // lambda12 - 2 sqrt(lambda1 lambda2)
  equal_zero_k,     // T(0) - L(0) - C(0,0) for identical samples at k = 0
  zero_transverse,  // J(0) + Dt(0), transverse-free feasibility line
  finite_k,         // C(0,0) - sqrt((T1(k)-L1(0)) (T2(k)-L2(0)))
  equal_finite_k,   // T(k) - L(0) - C(0,0) for identical samples at k != 0
};

double sync_residual(const QubitParams& p, SyncForm form);
// Bond-constant variants for uniform nearest-neighbour stacks: the cross sum
// reduces to a single bond value j12 + d12zz per site.
double sync_residual_bond(double T1k, double L10, double T2k, double L20,
                          double j12_plus_d12zz);
double sync_residual_bond_equal(double Tk, double L0, double j12_plus_d12zz);

struct ScanPoint {
  double x, f;
};

class NoRootError : public std::runtime_error {
 public:
  NoRootError(std::string msg, std::vector<ScanPoint> pts)
      : std::runtime_error(std::move(msg)), scan(std::move(pts)) {}
  std::vector<ScanPoint> scan;
};

struct RootResult {
  double x, residual;
};

// Scans [lo, hi] at scan_points+1 nodes, bisects every bracketed sign change
// to machine width and returns all roots in ascending order. Throws
// NoRootError (carrying the scan) when no sign change exists. Nodes where the
// residual is undefined (the callback throws) are skipped.
std::vector<RootResult> solve_synchronism(const std::function<double(double)>& f,
                                          double lo, double hi, int scan_points = 512,
                                          double tol = 1e-10);

// Completed-square reduction at the synchronism point:
//   H(n1,n2) = lambda_m (m2 n2 - m1 n1 + shift_m)^2 + nt_coeff (n1+n2) + constant
struct SquareForm {
  double m1 = 0.0, m2 = 0.0;    // sqrt(2 lambda_i / lambda12)
  double lambda_m = 0.0;        // lambda12 / 2
  double shift_m = 0.0;         // (E2-E1) / (2 (sqrt(l2)+sqrt(l1)))
  double nt_coeff = 0.0;        // (sqrt(l2) E1 + sqrt(l1) E2) / (sqrt(l2)+sqrt(l1))
  double constant = 0.0;        // -(E2-E1)^2 / (2 (sqrt(l2)+sqrt(l1)))^2
  double evaluate(double n1, double n2) const;
};
SquareForm square_form(const QubitParams& p);

// Charge-like form at the symmetric point lambda1 = lambda2 = lambda:
//   H = lambda (m - n_g)^2 + nt_coeff n_t + constant,  m = n1 - n2.
// Defined whenever the anharmonicities agree; it reproduces the secular
// energies exactly only where the matching condition lambda12 = 2 lambda holds.
struct SymmetricQubit {
  double lambda = 0.0;
  double n_g = 0.0;             // (E2-E1) / (4 lambda)
  double nt_coeff = 0.0;        // (E1+E2)/2
  double constant = 0.0;        // -lambda n_g^2
  double alt_ng_per_nt = 0.0;   // alternative offset normalization kept for comparison
};
SymmetricQubit symmetric_qubit(const QubitParams& p);

// Diagonal secular energy E1 n1 + E2 n2 + l1 n1^2 + l2 n2^2 - l12 n1 n2.
double secular_energy(const QubitParams& p, double n1, double n2);

// Working pair |n1, n2> <-> |n1+1, n2-1> at fixed n_t = n1 + n2, chosen to
// minimize the summed secular energy; ties resolve toward smaller n1.
struct QubitPair {
  long n1, n2;
};
QubitPair select_qubit_pair(const QubitParams& p, long n_t);

// Effective pair-transfer coupling K = kappa + kappa' (n_t - 1).
cplx pair_coupling(const QubitParams& p, long n_t);

// Comparison between the composed coupling and the single-shot closed form
// carrying an extra 1/N normalization; kept as a numerical cross-check.
struct KReport {
  cplx composed{};
  cplx alt_normalized{};
  double discrepancy = 0.0;
};
KReport pair_coupling_report(const QubitParams& p, long n_t);

// Two-mode ladder-operator Hamiltonian with modes {0, 1}.
BosonTermSum qubit_terms(const QubitParams& p);

}  // namespace mbq

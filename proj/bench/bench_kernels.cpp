// Benchmark: parallel kernels against their serial reference implementations.
// Prints a timing table and the max deviation between the two results for each
// kernel. Deviations must vanish; timings are informational only (the ratio
// depends on the machine and thread count, and is not asserted).
#include <omp.h>

#include <cstdio>
#include <random>

#include <mbq/bosonize.hpp>
#include <mbq/fock.hpp>
#include <mbq/fourier.hpp>
#include <mbq/spin_exact.hpp>

using namespace mbq;

namespace {

struct Case {
  LatticeSpec lat;
  CouplingTable table;
};

Case make_case(int n_per_sample) {
  LatticeSpec lat = make_lattice({n_per_sample, 1, 1}, 1.0, 1.2, 0.5, 1.0, 0.3, 0.2);
  CouplingModel m;
  m.intra = ExchangeModel::nearest_neighbor;
  m.J = 1.0;
  m.d = 0.3;
  m.cross = ExchangeModel::uniform;
  m.J12 = 0.4;
  m.d_cross = 0.2;
  return {lat, build_couplings(lat, m)};
}

void print_row(const char* kernel, double t_serial, double t_parallel, double dev) {
  std::printf("%-22s %12.6f %12.6f %10.2f %12.3g\n", kernel, t_serial, t_parallel,
              t_parallel > 0.0 ? t_serial / t_parallel : 0.0, dev);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %12s %12s %10s %12s\n", "kernel", "serial [s]", "parallel [s]",
              "speedup", "max |diff|");

  {  // spin matrix on a 12-site mixed-spin system (dim 3^6 * 2^6)
    Case c = make_case(6);
    SpinSystem sys = make_spin_system(c.lat, c.table);
    double t0 = omp_get_wtime();
    auto hs = build_spin_matrix_serial(sys);
    double t1 = omp_get_wtime();
    auto hp = build_spin_matrix(sys);
    double t2 = omp_get_wtime();
    double dev = 0.0;
    Eigen::SparseMatrix<cplx> diff = hp - hs;
    for (int k = 0; k < diff.outerSize(); ++k)
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(diff, k); it; ++it)
        dev = std::max(dev, std::abs(it.value()));
    print_row("spin matrix", t1 - t0, t2 - t1, dev);
  }

  {  // occupation-basis matrix of the quartic expansion, shell 3 over 12 modes
    Case c = make_case(6);
    HPExpansion hp = hp_expand(c.lat, c.table);
    FockSpace sp = FockSpace::build(std::vector<int>(12, 3), 3);
    double t0 = omp_get_wtime();
    Eigen::MatrixXcd hs = build_fock_matrix_serial(hp.conserving, sp);
    double t1 = omp_get_wtime();
    Eigen::MatrixXcd hpm = build_fock_matrix(hp.conserving, sp);
    double t2 = omp_get_wtime();
    print_row("occupation matrix", t1 - t0, t2 - t1, (hpm - hs).cwiseAbs().maxCoeff());
  }

  {  // lattice-sum tables on a larger ring
    Case c = make_case(48);
    double t0 = omp_get_wtime();
    FourierTable ts = build_fourier_table_serial(c.table, c.lat);
    double t1 = omp_get_wtime();
    FourierTable tp = build_fourier_table(c.table, c.lat);
    double t2 = omp_get_wtime();
    double dev = 0.0;
    const int nk = ts.grid.size();
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < nk; ++k) {
        dev = std::max(dev, std::abs(ts.j_intra(s, k) - tp.j_intra(s, k)));
        for (int comp = 0; comp < 6; ++comp)
          dev = std::max(dev, std::abs(ts.d_intra(s, comp, k) - tp.d_intra(s, comp, k)));
      }
    for (int k1 = 0; k1 < nk; ++k1)
      for (int k2 = 0; k2 < nk; ++k2) {
        dev = std::max(dev, std::abs(ts.j_cross(k1, k2) - tp.j_cross(k1, k2)));
        for (int comp = 0; comp < 6; ++comp)
          dev = std::max(dev, std::abs(ts.d_cross(comp, k1, k2) - tp.d_cross(comp, k1, k2)));
      }
    print_row("lattice-sum table", t1 - t0, t2 - t1, dev);
  }

  return 0;
}

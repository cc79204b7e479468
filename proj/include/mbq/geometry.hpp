// geometry.hpp -- two-sample lattices: site positions, spins, fields, periodic wrap.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace mbq {

using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

// Periodic grid behind the generated geometries. Both samples share the same
// dims and spacing; sample 2 is a rigid copy of sample 1 shifted by offset2.
// An axis with dims[a] == 1 is trivially non-periodic.
struct Grid {
  std::array<int, 3> dims{1, 1, 1};
  double spacing{1.0};
  Vec3 offset2{0.0, 0.0, 0.0};

  int sites() const { return dims[0] * dims[1] * dims[2]; }
  std::array<int, 3> split(int site) const {
    return {site / (dims[1] * dims[2]), (site / dims[2]) % dims[1], site % dims[2]};
  }
  int fuse(const std::array<int, 3>& g) const {
    return (g[0] * dims[1] + g[1]) * dims[2] + g[2];
  }
  Vec3 position(int site) const {
    auto g = split(site);
    return Vec3(g[0] * spacing, g[1] * spacing, g[2] * spacing);
  }
  // minimum-image component delta in grid units, in (-n/2, n/2]
  static int wrap(int delta, int n) {
    int d = delta % n;
    if (d < 0) d += n;
    if (2 * d > n) d -= n;
    return d;
  }
};

// Two samples of N sites each. Sites 0..N-1 belong to sample 0, N..2N-1 to
// sample 1 (samples are 0-based internally, 1-based in user-facing output).
struct LatticeSpec {
  int n_per_sample{0};
  std::array<double, 2> spin{0.5, 0.5};   // S1, S2
  std::array<double, 2> field{0.0, 0.0};  // h1, h2
  std::vector<Vec3> position;             // size 2N, sample-0 block first
  std::optional<Grid> grid;               // set for generated geometries

  int n_sites() const { return 2 * n_per_sample; }
  int sample_of(int site) const { return site < n_per_sample ? 0 : 1; }
  int local_index(int site) const { return site % n_per_sample; }
  double spin_of(int site) const { return spin[sample_of(site)]; }

  // Displacement from site i to site j. On grid lattices the grid-aligned part
  // is wrapped to the nearest image; the sample offset is kept as is.
  Vec3 displacement(int i, int j) const;

  // Throws std::invalid_argument on violated invariants (coincident sites,
  // non-half-integer spin, size mismatch).
  void validate() const;
};

// All generated geometries are periodic grids; the pair presets differ only in
// dims and in how the inter-sample gap maps onto offset2:
//   ring pair:  dims (n,1,1), samples stacked along z, offset2 = (0,0,gap)
//   film pair:  dims (n1,n2,1), planes z=0 and z=gap
//   box pair:   dims (n1,n2,n3), facing surfaces separated by gap along z
LatticeSpec make_lattice(std::array<int, 3> dims, double spacing, double gap,
                         double S1, double S2, double h1, double h2);

// Explicit site lists (one vector per sample). No periodicity assumed.
LatticeSpec make_lattice_from_positions(const std::vector<Vec3>& sample1,
                                        const std::vector<Vec3>& sample2,
                                        double S1, double S2, double h1, double h2);

}  // namespace mbq

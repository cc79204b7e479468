#include "mbq/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mbq {

Vec3 LatticeSpec::displacement(int i, int j) const {
  if (!grid) return position[j] - position[i];
  const Grid& g = *grid;
  auto gi = g.split(local_index(i));
  auto gj = g.split(local_index(j));
  Vec3 d(0.0, 0.0, 0.0);
  for (int a = 0; a < 3; ++a)
    d[a] = Grid::wrap(gj[a] - gi[a], g.dims[a]) * g.spacing;
  if (sample_of(j) != sample_of(i)) {
    Vec3 off = g.offset2;
    d += (sample_of(j) == 1) ? off : Vec3(-off);
  }
  return d;
}

void LatticeSpec::validate() const {
  if (n_per_sample < 1) throw std::invalid_argument("lattice: need at least one site per sample");
  if ((int)position.size() != 2 * n_per_sample)
    throw std::invalid_argument("lattice: position list must hold 2N sites");
  for (int m = 0; m < 2; ++m) {
    double twoS = 2.0 * spin[m];
    if (spin[m] < 0.5 - 1e-12 || std::abs(twoS - std::round(twoS)) > 1e-9)
      throw std::invalid_argument("lattice: spin S" + std::to_string(m + 1) +
                                  " must be half-integer >= 1/2");
  }
  // coincident sites make dipole tensors singular and the model ill-defined
  for (int i = 0; i < n_sites(); ++i)
    for (int j = i + 1; j < n_sites(); ++j)
      if ((position[j] - position[i]).norm() < 1e-9)
        throw std::invalid_argument("lattice: coincident sites " + std::to_string(i) + "," +
                                    std::to_string(j));
}

LatticeSpec make_lattice(std::array<int, 3> dims, double spacing, double gap,
                         double S1, double S2, double h1, double h2) {
  for (int a = 0; a < 3; ++a)
    if (dims[a] < 1) throw std::invalid_argument("lattice: grid dims must be positive");
  if (spacing <= 0.0) throw std::invalid_argument("lattice: spacing must be positive");
  Grid g;
  g.dims = dims;
  g.spacing = spacing;
  g.offset2 = Vec3(0.0, 0.0, (dims[2] - 1) * spacing + gap);

  LatticeSpec lat;
  lat.n_per_sample = g.sites();
  lat.spin = {S1, S2};
  lat.field = {h1, h2};
  lat.grid = g;
  lat.position.reserve(2 * lat.n_per_sample);
  for (int s = 0; s < lat.n_per_sample; ++s) lat.position.push_back(g.position(s));
  for (int s = 0; s < lat.n_per_sample; ++s) lat.position.push_back(g.position(s) + g.offset2);
  lat.validate();
  return lat;
}

LatticeSpec make_lattice_from_positions(const std::vector<Vec3>& sample1,
                                        const std::vector<Vec3>& sample2,
                                        double S1, double S2, double h1, double h2) {
  if (sample1.size() != sample2.size())
    throw std::invalid_argument("lattice: both samples must contain the same number of sites");
  LatticeSpec lat;
  lat.n_per_sample = (int)sample1.size();
  lat.spin = {S1, S2};
  lat.field = {h1, h2};
  lat.position = sample1;
  lat.position.insert(lat.position.end(), sample2.begin(), sample2.end());
  lat.validate();
  return lat;
}

}  // namespace mbq

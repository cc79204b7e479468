// fock.hpp -- truncated multimode Fock spaces and matrix assembly.
#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "mbq/operators.hpp"

namespace mbq {

// Occupation-number basis over a fixed mode set. States are enumerated
// lexicographically in the occupation vector, so the ordering is reproducible.
// With `shell` set, only states with total occupation == shell are kept
// (per-mode caps still apply).
class FockSpace {
 public:
  static FockSpace build(std::vector<int> caps, std::optional<int> shell = std::nullopt);
  // explicit subspace restriction (e.g. an isolated transition pair)
  static FockSpace from_states(int n_modes, std::vector<std::vector<int>> states);

  int n_modes() const { return n_modes_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<int>& state(std::size_t idx) const { return states_[idx]; }
  const std::vector<std::vector<int>>& states() const { return states_; }
  const std::vector<int>& caps() const { return caps_; }
  std::optional<int> shell() const { return shell_; }

  // basis index of an occupation vector, or -1 when outside the space
  long index_of(const std::vector<int>& occ) const;

 private:
  int n_modes_{0};
  std::vector<int> caps_;
  std::optional<int> shell_;
  std::vector<std::vector<int>> states_;
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (int x : v) {
        h ^= (std::size_t)(x + 0x9e3779b9);
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  std::unordered_map<std::vector<int>, long, VecHash> index_;
};

// Matrix of a number-conserving term sum on the truncated space:
// H(r,c) = <r| sum_t |c>, exact ladder amplitudes, terms leading outside the
// space are projected away. Throws if any term changes the total occupation.
Eigen::MatrixXcd build_fock_matrix(const BosonTermSum& sum, const FockSpace& space);
Eigen::MatrixXcd build_fock_matrix_serial(const BosonTermSum& sum, const FockSpace& space);

double hermiticity_residual(const Eigen::MatrixXcd& m);

// Max-entry residual of [H, N_t] where N_t counts total occupation; zero for
// any matrix built from number-conserving terms.
double number_commutator_residual(const Eigen::MatrixXcd& h, const FockSpace& space);

}  // namespace mbq

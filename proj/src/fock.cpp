#include "mbq/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace mbq {

FockSpace FockSpace::build(std::vector<int> caps, std::optional<int> shell) {
  FockSpace s;
  s.n_modes_ = (int)caps.size();
  if (s.n_modes_ == 0) throw std::invalid_argument("fock space: no modes");
  for (int c : caps)
    if (c < 0) throw std::invalid_argument("fock space: negative cap");
  s.caps_ = std::move(caps);
  s.shell_ = shell;

  // lexicographic enumeration by recursion over modes
  std::vector<int> occ(s.n_modes_, 0);
  std::size_t guard = 0;
  auto total = [&occ]() {
    int t = 0;
    for (int x : occ) t += x;
    return t;
  };
  std::function<void(int)> walk = [&](int mode) {
    if (mode == s.n_modes_) {
      if (!shell || total() == *shell) {
        s.index_.emplace(occ, (long)s.states_.size());
        s.states_.push_back(occ);
      }
      return;
    }
    for (int n = 0; n <= s.caps_[mode]; ++n) {
      occ[mode] = n;
      if (shell && total() > *shell) {
        occ[mode] = 0;
        break;
      }
      walk(mode + 1);
      if (++guard > (std::size_t)1 << 31) throw std::runtime_error("fock space: enumeration blew up");
    }
    occ[mode] = 0;
  };
  walk(0);
  if (s.states_.empty()) throw std::invalid_argument("fock space: empty basis (shell unreachable?)");
  return s;
}

FockSpace FockSpace::from_states(int n_modes, std::vector<std::vector<int>> states) {
  FockSpace s;
  s.n_modes_ = n_modes;
  s.caps_.assign(n_modes, 0);
  if (states.empty()) throw std::invalid_argument("fock space: empty basis");
  for (const auto& st : states) {
    if ((int)st.size() != n_modes)
      throw std::invalid_argument("fock space: state length does not match mode count");
    for (int i = 0; i < n_modes; ++i) {
      if (st[i] < 0) throw std::invalid_argument("fock space: negative occupation");
      s.caps_[i] = std::max(s.caps_[i], st[i]);
    }
    if (!s.index_.emplace(st, (long)s.states_.size()).second)
      throw std::invalid_argument("fock space: duplicate state");
    s.states_.push_back(st);
  }
  return s;
}

long FockSpace::index_of(const std::vector<int>& occ) const {
  auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

namespace {

Eigen::MatrixXcd build_matrix(const BosonTermSum& sum, const FockSpace& space, bool parallel) {
  int bad = sum.first_nonconserving();
  if (bad >= 0)
    throw std::invalid_argument("fock matrix: term " + std::to_string(bad) +
                                " does not conserve the total occupation");
  const auto& terms = sum.terms();
  const long dim = (long)space.dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

#pragma omp parallel for schedule(static) if (parallel)
  for (long c = 0; c < dim; ++c) {
    std::vector<int> occ;
    for (const auto& t : terms) {
      occ = space.state(c);
      double amp = 1.0;
      bool dead = false;
      // rightmost operator acts first; amplitudes are the exact ladder factors
      for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) {
        int& n = occ[it->mode];
        if (it->create) {
          amp *= std::sqrt((double)(n + 1));
          ++n;
        } else {
          if (n == 0) {
            dead = true;
            break;
          }
          amp *= std::sqrt((double)n);
          --n;
        }
      }
      if (dead) continue;
      long r = space.index_of(occ);
      if (r < 0) continue;  // projected away by the truncation
      h(r, c) += t.coeff * amp;
    }
  }
  return h;
}

}  // namespace

Eigen::MatrixXcd build_fock_matrix(const BosonTermSum& sum, const FockSpace& space) {
  return build_matrix(sum, space, true);
}

Eigen::MatrixXcd build_fock_matrix_serial(const BosonTermSum& sum, const FockSpace& space) {
  return build_matrix(sum, space, false);
}

double hermiticity_residual(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double number_commutator_residual(const Eigen::MatrixXcd& h, const FockSpace& space) {
  if ((std::size_t)h.rows() != space.dim() || (std::size_t)h.cols() != space.dim())
    throw std::invalid_argument("number_commutator_residual: dimension mismatch");
  std::vector<long> total(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) {
    long t = 0;
    for (int occ : space.state(i)) t += occ;
    total[i] = t;
  }
  double worst = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      const double gap = (double)(total[(std::size_t)r] - total[(std::size_t)c]);
      worst = std::max(worst, std::abs(h(r, c)) * std::abs(gap));
    }
  return worst;
}

}  // namespace mbq

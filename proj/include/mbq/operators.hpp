// operators.hpp -- sums of bosonic ladder-operator products with exact
// normal ordering, mode substitution and Hermitian closure.
#pragma once

#include <complex>
#include <functional>
#include <initializer_list>
#include <vector>

#include "mbq/geometry.hpp"

namespace mbq {

struct BosonOp {
  int mode;
  bool create;
  bool operator==(const BosonOp&) const = default;
};

inline BosonOp bdag(int mode) { return {mode, true}; }
inline BosonOp b(int mode) { return {mode, false}; }

// One product of ladder operators, applied right to left (rightmost acts first).
struct BosonTerm {
  cplx coeff{0.0, 0.0};
  std::vector<BosonOp> ops;
};

class BosonTermSum {
 public:
  void add(cplx coeff, std::initializer_list<BosonOp> ops);
  void add(cplx coeff, std::vector<BosonOp> ops);
  void add(const BosonTermSum& other);

  const std::vector<BosonTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Rewrites every product with creations (sorted by mode) left of
  // annihilations (sorted by mode), inserting the commutator terms, and
  // collects equal products. Coefficients below `prune` (relative to the
  // largest) are dropped.
  BosonTermSum normal_ordered(double prune = 1e-14) const;

  // Substitutes each annihilation operator b_old = sum_i u_i b_new_i (and the
  // conjugate expansion for creations). `expansion` maps an old mode id to its
  // (coefficient, new mode) list.
  BosonTermSum substituted(
      const std::function<std::vector<std::pair<cplx, int>>(int)>& expansion) const;

  BosonTermSum adjoint() const;

  // True when every term has equally many creations and annihilations.
  bool number_conserving() const;
  // Index of the first non-conserving term, or -1.
  int first_nonconserving() const;

  // Coefficient of the given normal-ordered product in the canonical form.
  cplx coefficient_of(const std::vector<BosonOp>& ops) const;

  double max_abs_coeff() const;

 private:
  std::vector<BosonTerm> terms_;
};

}  // namespace mbq

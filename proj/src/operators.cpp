#include "mbq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mbq {

namespace {

// ordering key for canonical products: creations first, then annihilations,
// each sorted by mode (legal because they commute among themselves)
std::vector<BosonOp> sorted_ops(std::vector<BosonOp> ops) {
  std::stable_sort(ops.begin(), ops.end(), [](const BosonOp& a, const BosonOp& b) {
    if (a.create != b.create) return a.create;
    return a.mode < b.mode;
  });
  return ops;
}

using OpsKey = std::vector<std::pair<int, int>>;  // (create?1:0, mode) list

OpsKey key_of(const std::vector<BosonOp>& ops) {
  OpsKey k;
  k.reserve(ops.size());
  for (const auto& o : ops) k.emplace_back(o.create ? 1 : 0, o.mode);
  return k;
}

}  // namespace

void BosonTermSum::add(cplx coeff, std::initializer_list<BosonOp> ops) {
  add(coeff, std::vector<BosonOp>(ops));
}

void BosonTermSum::add(cplx coeff, std::vector<BosonOp> ops) {
  if (coeff == cplx(0.0)) return;
  terms_.push_back({coeff, std::move(ops)});
}

void BosonTermSum::add(const BosonTermSum& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

BosonTermSum BosonTermSum::normal_ordered(double prune) const {
  std::map<OpsKey, cplx> collected;
  std::vector<BosonTerm> work(terms_);
  while (!work.empty()) {
    BosonTerm t = std::move(work.back());
    work.pop_back();
    // find an annihilation immediately left of a creation
    std::size_t p = 0;
    bool swapped = false;
    for (; p + 1 < t.ops.size(); ++p) {
      if (!t.ops[p].create && t.ops[p + 1].create) {
        swapped = true;
        break;
      }
    }
    if (!swapped) {
      auto ops = sorted_ops(t.ops);
      collected[key_of(ops)] += t.coeff;
      continue;
    }
    // b_a b'_c = b'_c b_a + delta_{ac}
    BosonTerm exchanged = t;
    std::swap(exchanged.ops[p], exchanged.ops[p + 1]);
    if (t.ops[p].mode == t.ops[p + 1].mode) {
      BosonTerm contracted;
      contracted.coeff = t.coeff;
      contracted.ops.assign(t.ops.begin(), t.ops.begin() + p);
      contracted.ops.insert(contracted.ops.end(), t.ops.begin() + p + 2, t.ops.end());
      work.push_back(std::move(contracted));
    }
    work.push_back(std::move(exchanged));
  }

  double scale = 0.0;
  for (const auto& [k, c] : collected) scale = std::max(scale, std::abs(c));
  BosonTermSum out;
  for (const auto& [k, c] : collected) {
    if (std::abs(c) <= prune * scale) continue;
    std::vector<BosonOp> ops;
    ops.reserve(k.size());
    for (const auto& [cr, mode] : k) ops.push_back({mode, cr == 1});
    out.terms_.push_back({c, std::move(ops)});
  }
  return out;
}

BosonTermSum BosonTermSum::substituted(
    const std::function<std::vector<std::pair<cplx, int>>(int)>& expansion) const {
  BosonTermSum out;
  for (const auto& t : terms_) {
    // running product of expanded operators
    std::vector<BosonTerm> partial{{t.coeff, {}}};
    for (const auto& op : t.ops) {
      auto exp = expansion(op.mode);
      std::vector<BosonTerm> next;
      next.reserve(partial.size() * exp.size());
      for (const auto& p : partial) {
        for (const auto& [u, new_mode] : exp) {
          cplx factor = op.create ? std::conj(u) : u;
          if (factor == cplx(0.0)) continue;
          BosonTerm q = p;
          q.coeff *= factor;
          q.ops.push_back({new_mode, op.create});
          next.push_back(std::move(q));
        }
      }
      partial = std::move(next);
    }
    for (auto& p : partial) out.terms_.push_back(std::move(p));
  }
  return out;
}

BosonTermSum BosonTermSum::adjoint() const {
  BosonTermSum out;
  for (const auto& t : terms_) {
    BosonTerm a;
    a.coeff = std::conj(t.coeff);
    a.ops.assign(t.ops.rbegin(), t.ops.rend());
    for (auto& o : a.ops) o.create = !o.create;
    out.terms_.push_back(std::move(a));
  }
  return out;
}

bool BosonTermSum::number_conserving() const { return first_nonconserving() < 0; }

int BosonTermSum::first_nonconserving() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    int balance = 0;
    for (const auto& o : terms_[i].ops) balance += o.create ? 1 : -1;
    if (balance != 0) return (int)i;
  }
  return -1;
}

cplx BosonTermSum::coefficient_of(const std::vector<BosonOp>& ops) const {
  // meaningful on canonical sums (see normal_ordered); reordering here is
  // only a convenience for already-normal-ordered queries
  auto want = key_of(sorted_ops(ops));
  cplx c = 0.0;
  for (const auto& t : terms_)
    if (key_of(sorted_ops(t.ops)) == want) c += t.coeff;
  return c;
}

double BosonTermSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

}  // namespace mbq

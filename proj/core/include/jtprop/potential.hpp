#pragma once

#include <span>
#include <utility>
#include <vector>

#include "jtprop/counters.hpp"
#include "jtprop/scope.hpp"

namespace jtprop {

/// A dense real-valued table over the power-set of its scope. Entry t holds
/// the value on the subset with bit (j-1) of t set iff the j-th smallest scope
/// variable is present.
class Potential {
 public:
  Potential() : table_(1, 1.0) {}
  Potential(Scope scope, std::vector<double> table);

  static Potential unit(Scope scope);

  const Scope& scope() const noexcept { return scope_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::span<const double> table() const noexcept { return table_; }
  std::span<double> table() noexcept { return table_; }
  double operator[](std::size_t t) const { return table_[t]; }
  double& operator[](std::size_t t) { return table_[t]; }

  bool has_zero_entry() const noexcept;
  bool strictly_positive() const noexcept;

 private:
  Scope scope_;
  std::vector<double> table_;
};

/// Sum onto `target` ⊆ scope(phi): result(Z) = Σ_{U : U ∩ target = Z} phi(U).
Potential marginalize(const Potential& phi, const Scope& target, OpCounters* ctr = nullptr);

/// Pointwise product over the union scope.
Potential multiply(const Potential& phi, const Potential& psi, OpCounters* ctr = nullptr);

/// Entrywise quotient over equal scopes, with x/0 := 0 (so also 0/0 := 0).
Potential divide(const Potential& phi, const Potential& psi, OpCounters* ctr = nullptr);

/// Normalizes a single-variable result table to probabilities (p0, p1).
/// Throws InconsistentModelError when the total mass is zero.
std::pair<double, double> normalize_marginal(const Potential& r);

}  // namespace jtprop

#include "jtprop/potential.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "jtprop/errors.hpp"

namespace jtprop {

Potential::Potential(Scope scope, std::vector<double> table)
    : scope_(std::move(scope)), table_(std::move(table)) {
  if (table_.size() != scope_.table_size())
    throw std::invalid_argument("Potential: table length must be 2^|scope|");
  for (double v : table_)
    if (v < 0.0) throw std::invalid_argument("Potential: negative entry");
}

Potential Potential::unit(Scope scope) {
  std::vector<double> t(scope.table_size(), 1.0);
  return Potential(std::move(scope), std::move(t));
}

bool Potential::has_zero_entry() const noexcept {
  return std::any_of(table_.begin(), table_.end(), [](double v) { return v == 0.0; });
}

bool Potential::strictly_positive() const noexcept { return !has_zero_entry(); }

Potential marginalize(const Potential& phi, const Scope& target, OpCounters* ctr) {
  if (!target.is_subset_of(phi.scope()))
    throw std::invalid_argument("marginalize: target not a subset of the scope");
  std::vector<double> out(target.table_size(), 0.0);
  SubsetProjector proj(phi.scope(), target);
  const std::uint64_t total = phi.size();
  for (std::uint64_t z = 0;;) {
    out[proj.current()] += phi[z];
    if (++z == total) break;
    proj.advance(static_cast<unsigned>(std::countr_zero(z)));
  }
  count_add(ctr, total);
  count_write(ctr, total);
  return Potential(target, std::move(out));
}

Potential multiply(const Potential& phi, const Potential& psi, OpCounters* ctr) {
  Scope u = phi.scope().unite(psi.scope());
  std::vector<double> out(u.table_size());
  SubsetProjector pa(u, phi.scope());
  SubsetProjector pb(u, psi.scope());
  const std::uint64_t total = out.size();
  for (std::uint64_t z = 0;;) {
    out[z] = phi[pa.current()] * psi[pb.current()];
    if (++z == total) break;
    unsigned t = static_cast<unsigned>(std::countr_zero(z));
    pa.advance(t);
    pb.advance(t);
  }
  count_mul(ctr, total);
  count_write(ctr, total);
  return Potential(std::move(u), std::move(out));
}

Potential divide(const Potential& phi, const Potential& psi, OpCounters* ctr) {
  if (!(phi.scope() == psi.scope()))
    throw std::invalid_argument("divide: scopes must be equal");
  std::vector<double> out(phi.size());
  for (std::uint64_t z = 0; z < out.size(); ++z)
    out[z] = psi[z] == 0.0 ? 0.0 : phi[z] / psi[z];
  count_div(ctr, out.size());
  count_write(ctr, out.size());
  return Potential(phi.scope(), std::move(out));
}

std::pair<double, double> normalize_marginal(const Potential& r) {
  if (r.scope().size() != 1)
    throw std::invalid_argument("normalize_marginal: expected a singleton scope");
  double total = r[0] + r[1];
  if (total <= 0.0)
    throw InconsistentModelError("marginal has zero total mass; the model admits no labelling");
  return {r[0] / total, r[1] / total};
}

}  // namespace jtprop

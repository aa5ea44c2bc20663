#include "jtprop/oracle.hpp"

#include <bit>
#include <stdexcept>

#include "jtprop/errors.hpp"

namespace jtprop {

MarginalResult brute_force_marginals(const Factorisation& f) {
  if (f.var_count > kBruteForceMaxVars)
    throw std::invalid_argument("brute_force_marginals: refusing " +
                                std::to_string(f.var_count) + " variables (limit " +
                                std::to_string(kBruteForceMaxVars) + ")");
  const Scope all = f.all_vars();
  std::vector<SubsetProjector> projs;
  projs.reserve(f.factors.size());
  for (const Potential& p : f.factors) projs.emplace_back(all, p.scope());

  std::vector<double> mass1(f.var_count, 0.0);
  double total = 0.0;
  const std::uint64_t count = std::uint64_t{1} << f.var_count;
  for (std::uint64_t mu = 0;;) {
    double w = 1.0;
    for (std::size_t i = 0; i < f.factors.size(); ++i) w *= f.factors[i][projs[i].current()];
    total += w;
    std::uint64_t bits = mu;
    while (bits != 0) {
      unsigned b = static_cast<unsigned>(std::countr_zero(bits));
      mass1[b] += w;
      bits &= bits - 1;
    }
    if (++mu == count) break;
    unsigned t = static_cast<unsigned>(std::countr_zero(mu));
    for (auto& p : projs) p.advance(t);
  }
  if (total <= 0.0)
    throw InconsistentModelError("factor product is identically zero over all labellings");

  MarginalResult out;
  out.tables.reserve(f.var_count);
  out.probs.reserve(f.var_count);
  for (VarId x = 1; x <= f.var_count; ++x) {
    double p1 = mass1[x - 1];
    out.tables.emplace_back(Scope{x}, std::vector<double>{total - p1, p1});
    out.probs.emplace_back((total - p1) / total, p1 / total);
  }
  return out;
}

}  // namespace jtprop

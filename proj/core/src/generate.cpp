#include "jtprop/generate.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace jtprop {
namespace {

// mt19937_64 with hand-rolled uniforms: identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double entry() { return 0.5 + 1.5 * uniform01(); }
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

Potential random_table(const Scope& s, Rng& rng, double zero_prob = 0.0) {
  std::vector<double> t(s.table_size());
  for (double& v : t) {
    if (zero_prob > 0.0 && rng.uniform01() < zero_prob)
      v = 0.0;
    else
      v = rng.entry();
  }
  return Potential(s, std::move(t));
}

}  // namespace

GeneratedInstance generate_star(const StarParams& p, std::uint64_t seed) {
  if (p.center_size < 2 || p.center_size > 20)
    throw std::invalid_argument("generate_star: center size must be in 2..20");
  if (p.sep_size < 1 || p.sep_size >= p.center_size)
    throw std::invalid_argument("generate_star: separator size must be in 1..center-1");
  if (p.degree < 1 || p.degree > 4096)
    throw std::invalid_argument("generate_star: degree must be in 1..4096");

  Rng rng(seed);
  GeneratedInstance out;
  out.f.var_count = p.center_size;

  std::vector<VarId> center(p.center_size);
  for (std::uint32_t i = 0; i < p.center_size; ++i) center[i] = i + 1;
  Scope center_scope(center);

  // Leaf windows rotate through the low-index center variables so the
  // separators stay on the slow-moving side of the subset enumeration.
  const std::uint32_t offsets = p.center_size - p.sep_size + 1;
  std::vector<Scope> seps;
  seps.reserve(p.degree);
  for (std::uint32_t j = 0; j < p.degree; ++j) {
    std::uint32_t off = j % offsets;
    std::vector<VarId> w(p.sep_size);
    for (std::uint32_t i = 0; i < p.sep_size; ++i) w[i] = off + i + 1;
    seps.emplace_back(std::move(w));
  }

  JunctionTree jt;
  for (const Scope& s : seps) jt.vertices.push_back(s);
  jt.vertices.push_back(center_scope);
  const auto center_idx = static_cast<std::int32_t>(p.degree);
  for (std::int32_t j = 0; j < center_idx; ++j) jt.edges.push_back({j, center_idx});

  for (std::uint32_t j = 0; j < p.degree; ++j) {
    out.f.factors.push_back(random_table(seps[j], rng));
    out.assignment.push_back(static_cast<std::int32_t>(j));
  }
  out.f.factors.push_back(random_table(center_scope, rng));
  out.assignment.push_back(center_idx);
  out.jt = std::move(jt);
  return out;
}

GeneratedInstance generate_chain(const ChainParams& p, std::uint64_t seed) {
  if (p.length < 1 || p.scope < 1)
    throw std::invalid_argument("generate_chain: length and scope must be positive");
  if (p.length + p.scope - 1 > kMaxVars)
    throw std::invalid_argument("generate_chain: too many variables");

  Rng rng(seed);
  GeneratedInstance out;
  out.f.var_count = p.length + p.scope - 1;
  for (std::uint32_t i = 1; i <= p.length; ++i) {
    std::vector<VarId> w(p.scope);
    for (std::uint32_t j = 0; j < p.scope; ++j) w[j] = i + j;
    out.f.factors.push_back(random_table(Scope(std::move(w)), rng));
  }
  return out;
}

GeneratedInstance generate_random(const RandomParams& p, std::uint64_t seed) {
  if (p.var_count < 1 || p.var_count > kMaxVars)
    throw std::invalid_argument("generate_random: bad variable count");
  if (p.max_scope < 1) throw std::invalid_argument("generate_random: bad max scope");

  Rng rng(seed);
  GeneratedInstance out;
  out.f.var_count = p.var_count;
  SubsetMask covered = 0;
  for (std::uint32_t i = 0; i < p.factor_count; ++i) {
    std::uint32_t k = 1 + static_cast<std::uint32_t>(
                              rng.below(std::min(p.max_scope, p.var_count)));
    std::vector<VarId> vars;
    while (vars.size() < k) {
      VarId v = 1 + static_cast<VarId>(rng.below(p.var_count));
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    Scope s(std::move(vars));
    covered |= s.full_mask();
    out.f.factors.push_back(random_table(s, rng, p.zero_prob));
  }
  for (VarId x = 1; x <= p.var_count; ++x)
    if (!(covered & var_bit(x)))
      out.f.factors.push_back(random_table(Scope{x}, rng, p.zero_prob));
  return out;
}

}  // namespace jtprop

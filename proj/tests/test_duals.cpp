#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "jtprop/duals.hpp"
#include "test_util.hpp"

using namespace jtprop;
using namespace jtprop::test;

TEST_CASE("p-dual oracle on the worked examples") {
  auto fixed = p_dual_oracle(Potential(Scope{}, {3.5}));
  CHECK(fixed[0] == 3.5);

  auto d1 = p_dual_oracle(Potential(Scope{1}, {2, 4}));
  CHECK(d1[0] == doctest::Approx(2));
  CHECK(d1[1] == doctest::Approx(0.5));

  auto d2 = p_dual_oracle(Potential(Scope{1, 2}, {1, 2, 3, 4}));
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(0.5));
  CHECK(d2[2] == doctest::Approx(1.0 / 3));
  CHECK(d2[3] == doctest::Approx(2.0 / 3));

  CHECK_THROWS_AS(p_dual_oracle(Potential(Scope{1}, {0, 1})), std::invalid_argument);
}

TEST_CASE("m-dual oracle on the worked examples") {
  auto m = m_dual_oracle(Potential(Scope{1, 2}, {1, 2, 3, 4}));
  CHECK(m[0] == 10);
  CHECK(m[1] == 6);
  CHECK(m[2] == 7);
  CHECK(m[3] == 4);

  CHECK(m_dual_oracle(Potential(Scope{}, {2.25}))[0] == 2.25);

  auto mu = m_dual_oracle(Potential::unit(Scope{1}));
  CHECK(mu[0] == 2);
  CHECK(mu[1] == 1);
}

TEST_CASE("transform1 equals the oracle") {
  auto t = transform1(Potential(Scope{1}, {2, 4}));
  CHECK(t[0] == doctest::Approx(2));
  CHECK(t[1] == doctest::Approx(0.5));

  auto t2 = transform1(Potential(Scope{1, 2}, {1, 2, 3, 4}));
  CHECK(t2[1] == doctest::Approx(0.5));
  CHECK(t2[2] == doctest::Approx(1.0 / 3));
  CHECK(t2[3] == doctest::Approx(2.0 / 3));

  CHECK(transform1(Potential(Scope{}, {7}))[0] == 7);

  TestRng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    Potential phi = random_potential(random_scope(10, 8, rng), rng);
    CHECK(max_rel_err(transform1(phi), p_dual_oracle(phi)) <= 1e-9);
  }
}

TEST_CASE("transform3 inverts the m-dual") {
  auto t = transform3(Potential(Scope{1, 2}, {10, 6, 7, 4}));
  CHECK(t[0] == 1);
  CHECK(t[1] == 2);
  CHECK(t[2] == 3);
  CHECK(t[3] == 4);

  CHECK(transform3(Potential(Scope{}, {4}))[0] == 4);

  TestRng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    Potential phi = random_potential(random_scope(10, 10, rng), rng);
    CHECK(max_rel_err(transform3(m_dual_oracle(phi)), phi) <= 1e-9);
  }
}

TEST_CASE("p-dual involution and multiplicativity") {
  TestRng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Scope s = random_scope(8, 6, rng);
    Potential phi = random_potential(s, rng);
    Potential psi = random_potential(s, rng);
    CHECK(max_rel_err(p_dual_oracle(p_dual_oracle(phi)), phi) <= 1e-9);
    auto lhs = p_dual_oracle(multiply(phi, psi));
    auto da = p_dual_oracle(phi);
    auto db = p_dual_oracle(psi);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(rel_err(lhs[i], da[i] * db[i]) <= 1e-9);
  }
}

TEST_CASE("cylindrical extension leaves the p-dual trivial off the base scope") {
  TestRng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    Scope y = random_scope(6, 3, rng);
    std::vector<VarId> extra;
    for (VarId v = 1; v <= 8; ++v)
      if (!y.contains(v) && rng.uniform01() < 0.4) extra.push_back(v);
    Scope x = y.unite(Scope(extra));
    Potential phi = random_potential(y, rng);
    // cylindrical extension of phi to x
    std::vector<double> ext(x.table_size());
    for (std::uint64_t t = 0; t < ext.size(); ++t)
      ext[t] = phi[y.index_of_mask(x.mask_of_index(t) & y.full_mask())];
    auto dual_ext = p_dual_oracle(Potential(x, std::move(ext)));
    auto dual_base = p_dual_oracle(phi);
    for (std::uint64_t t = 0; t < dual_ext.size(); ++t) {
      SubsetMask m = x.mask_of_index(t);
      if ((m & ~y.full_mask()) == 0)
        CHECK(rel_err(dual_ext[t], dual_base[y.index_of_mask(m)]) <= 1e-9);
      else
        CHECK(dual_ext[t] == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("m-dual is linear") {
  TestRng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    Scope s = random_scope(8, 6, rng);
    Potential a = random_potential(s, rng);
    Potential b = random_potential(s, rng);
    std::vector<double> sum(a.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + b[i];
    auto lhs = m_dual_oracle(Potential(s, std::move(sum)));
    auto ma = m_dual_oracle(a);
    auto mb = m_dual_oracle(b);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(rel_err(lhs[i], ma[i] + mb[i]) <= 1e-12);
  }
}

TEST_CASE("product_of_duals over a union straddle-set") {
  SearchContext ctx(8);

  // single input: sparse copy over its own power-set
  auto d = transform1(Potential(Scope{1, 2}, {1, 2, 3, 4}));
  std::vector<Potential> single{d};
  auto sp = product_of_duals(ctx, single);
  CHECK(sp.shape.leaf_count() == 4);
  auto masks = sp.shape.leaf_masks();
  for (std::size_t i = 0; i < masks.size(); ++i)
    CHECK(sp.values[i] == doctest::Approx(d[d.scope().index_of_mask(masks[i])]));

  // two singleton scopes: the empty set collects both factors
  auto d1 = transform1(Potential(Scope{1}, {2, 5}));
  auto d2 = transform1(Potential(Scope{2}, {1, 3}));
  std::vector<Potential> both{d1, d2};
  auto sp2 = product_of_duals(ctx, both);
  auto m2 = sp2.shape.leaf_masks();
  CHECK(sp2.shape.leaf_count() == 3);
  for (std::size_t i = 0; i < m2.size(); ++i) {
    if (m2[i] == 0) CHECK(sp2.values[i] == doctest::Approx(d1[0] * d2[0]));
    if (m2[i] == 0b01) CHECK(sp2.values[i] == doctest::Approx(d1[1]));
    if (m2[i] == 0b10) CHECK(sp2.values[i] == doctest::Approx(d2[1]));
  }

  // overlapping scopes {1,2} and {2,3}: ζ has 6 members, {2} collects both
  auto da = transform1(Potential(Scope{1, 2}, {1, 2, 3, 4}));
  auto db = transform1(Potential(Scope{2, 3}, {2, 1, 1, 2}));
  std::vector<Potential> overlap{da, db};
  auto sp3 = product_of_duals(ctx, overlap);
  CHECK(sp3.shape.leaf_count() == 6);
  auto m3 = sp3.shape.leaf_masks();
  for (std::size_t i = 0; i < m3.size(); ++i)
    if (m3[i] == 0b10)
      CHECK(sp3.values[i] ==
            doctest::Approx(da[da.scope().index_of_mask(0b10)] *
                            db[db.scope().index_of_mask(0b10)]));
}

TEST_CASE("transform2 on a full power-set matches the m-dual oracle") {
  SearchContext ctx(8);
  auto phi = Potential(Scope{1, 2}, {1, 2, 3, 4});
  SparsePotential sp;
  sp.shape = StraddleTree::power_set(phi.scope());
  auto dual = transform1(phi);
  sp.values.assign(dual.table().begin(), dual.table().end());
  auto md = transform2(ctx, std::move(sp));
  auto want = m_dual_oracle(phi);
  auto masks = md.shape.leaf_masks();
  for (std::size_t i = 0; i < masks.size(); ++i)
    CHECK(md.values[i] == doctest::Approx(want[phi.scope().index_of_mask(masks[i])]));

  // empty scope: identity
  SparsePotential tiny;
  tiny.shape = StraddleTree::single_leaf();
  tiny.values = {5.0};
  auto out = transform2(ctx, std::move(tiny));
  CHECK(out.values[0] == 5.0);
}

TEST_CASE("transform2 over a strict union straddle-set") {
  // ζ = P({1}) ∪ P({2}); the sparse m-dual must agree with the dense m-dual
  // of the product on ζ.
  SearchContext ctx(8);
  Potential u1(Scope{1}, {2, 5});
  Potential u2(Scope{2}, {1, 3});
  std::vector<Potential> duals{transform1(u1), transform1(u2)};
  auto sp = product_of_duals(ctx, duals);
  auto md = transform2(ctx, std::move(sp));
  auto dense = m_dual_oracle(multiply(u1, u2));
  auto masks = md.shape.leaf_masks();
  for (std::size_t i = 0; i < masks.size(); ++i)
    CHECK(md.values[i] ==
          doctest::Approx(dense[dense.scope().index_of_mask(masks[i])]).epsilon(1e-9));
}

TEST_CASE("full pipeline round trip") {
  SearchContext ctx(12);
  TestRng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    Scope s = random_scope(10, 7, rng);
    Potential phi = random_potential(s, rng);
    SparsePotential sp;
    sp.shape = StraddleTree::power_set(s);
    auto dual = transform1(phi);
    sp.values.assign(dual.table().begin(), dual.table().end());
    transform2_in_place(ctx, sp);
    // read the tree back into a dense table
    std::vector<double> dense(s.table_size());
    auto masks = sp.shape.leaf_masks();
    for (std::size_t i = 0; i < masks.size(); ++i)
      dense[s.index_of_mask(masks[i])] = sp.values[i];
    auto back = transform3(Potential(s, std::move(dense)));
    CHECK(max_rel_err(back, phi) <= 1e-9);
  }
}

TEST_CASE("marginalise_mduals restricts the sparse m-dual") {
  SearchContext ctx(8);
  {
    auto g = Potential(Scope{1, 2}, {1, 2, 3, 4});
    SparsePotential sp;
    sp.shape = StraddleTree::power_set(g.scope());
    auto md = m_dual_oracle(g);
    sp.values.assign(md.table().begin(), md.table().end());
    Scope targets[2] = {Scope{1}, Scope{2}};
    auto out = marginalise_mduals(ctx, sp, targets);
    CHECK(out[0][0] == 10);
    CHECK(out[0][1] == 6);
    CHECK(out[1][0] == 10);
    CHECK(out[1][1] == 7);

    // single target equal to the full scope: identity copy
    Scope full[1] = {g.scope()};
    auto same = marginalise_mduals(ctx, sp, full);
    CHECK(max_rel_err(same[0], md) <= 1e-15);

    Scope bad[1] = {Scope{3}};
    CHECK_THROWS_AS(marginalise_mduals(ctx, sp, bad), std::invalid_argument);
  }
  {
    // Γ from Υ1 = [2,5] over {1}, Υ2 = [1,3] over {2}: restricted superset sums
    Potential u1(Scope{1}, {2, 5});
    Potential u2(Scope{2}, {1, 3});
    std::vector<Potential> duals{transform1(u1), transform1(u2)};
    auto sp = transform2(ctx, product_of_duals(ctx, duals));
    Scope targets[2] = {Scope{1}, Scope{2}};
    auto out = marginalise_mduals(ctx, sp, targets);
    CHECK(out[0][0] == doctest::Approx(28));
    CHECK(out[0][1] == doctest::Approx(20));
    CHECK(out[1][0] == doctest::Approx(28));
    CHECK(out[1][1] == doctest::Approx(21));
  }
}

TEST_CASE("operation2_via_duals against direct multiply-then-marginalize") {
  Potential u1(Scope{1}, {2, 5});
  Potential u2(Scope{2}, {1, 3});
  std::vector<Potential> ins{u1, u2};
  auto out = operation2_via_duals(ins);
  CHECK(out[0][0] == doctest::Approx(8));
  CHECK(out[0][1] == doctest::Approx(20));
  CHECK(out[1][0] == doctest::Approx(7));
  CHECK(out[1][1] == doctest::Approx(21));

  // single input is its own marginal
  std::vector<Potential> one{Potential(Scope{2, 4}, {1, 2, 3, 4})};
  auto same = operation2_via_duals(one);
  CHECK(max_rel_err(same[0], one[0]) <= 1e-12);

  // random instances, including zeros: compare with the definition
  TestRng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t k = 1 + rng.below(4);
    std::vector<Potential> inputs;
    for (std::size_t i = 0; i < k; ++i)
      inputs.push_back(random_potential(random_scope(8, 4, rng), rng, trial % 2 ? 0.25 : 0.0));
    Potential prod = Potential::unit(Scope{});
    for (const Potential& p : inputs) prod = multiply(prod, p);
    auto got = operation2_via_duals(inputs);
    for (std::size_t i = 0; i < k; ++i) {
      auto want = marginalize(prod, inputs[i].scope());
      CHECK(max_rel_err(got[i], want) <= 1e-9);
      // exact zeros must stay exact
      for (std::size_t t = 0; t < want.size(); ++t)
        if (want[t] == 0.0) CHECK(got[i][t] == 0.0);
    }
  }
}

TEST_CASE("transform2 peak live values stay within (|C|+1)|zeta|") {
  TestRng rng(55);
  SearchContext ctx(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t k = 1 + rng.below(3);
    std::vector<Potential> duals;
    SubsetMask uni = 0;
    for (std::size_t i = 0; i < k; ++i) {
      Scope s = random_scope(10, 5, rng);
      uni |= s.full_mask();
      duals.push_back(transform1(random_potential(s, rng)));
    }
    OpCounters ctr;
    auto sp = product_of_duals(ctx, duals, &ctr);
    const std::uint64_t zeta = sp.shape.leaf_count();
    const std::uint64_t c = Scope::from_mask(uni).size();
    OpCounters t2ctr;
    aux_acquire(&t2ctr, zeta);  // the tree being transformed counts as live
    transform2_in_place(ctx, sp, &t2ctr);
    CHECK(t2ctr.peak_aux_entries <= (c + 1) * zeta);
  }
}

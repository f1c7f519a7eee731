#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "rif/catalog.hpp"
#include "rif/tate.hpp"

using namespace rif;

namespace {

// Small finite modules: catalog lattices mod n, and a few permutation modules.
std::vector<GammaModule> finite_corpus(const FiniteGroup& g, std::size_t max_order) {
  std::vector<GammaModule> out;
  for (const auto& l : lattice_catalog(g))
    for (int n : {2, 3, 4}) {
      GammaModule m = reduce_mod(l, n);
      if (m.group().order() <= max_order) out.push_back(m);
    }
  for (const auto& h : g.subgroups()) {
    if (h.size() == g.order()) continue;
    GammaModule m = permutation_module(GammaSet::coset_space(g, h), 2);
    if (m.group().order() <= max_order) out.push_back(m);
  }
  return out;
}

bool divides(const Int& a, const Int& b) { return b % a == 0; }

bool elementwise_bijective(const GroupMap& f) {
  std::set<IntVector> seen;
  bool ok = true;
  f.source.for_each_element([&](const IntVector& x) {
    ok = ok && seen.insert(f.target.reduce(apply_map(f, x))).second;
    return ok;
  });
  return ok && Int(seen.size()) == f.target.order();
}

CochainTable random_table(std::mt19937& rng, const GammaModule& m, std::size_t k) {
  std::uniform_int_distribution<int> d(-5, 5);
  CochainTable t(tuple_count(m.gamma(), k));
  for (auto& v : t) {
    v.resize(m.num_generators());
    for (auto& x : v) x = d(rng);
  }
  return t;
}

ShortExactSequence multiplication_sequence(const GammaModule& l, int n) {
  std::size_t r = l.num_generators();
  return {l, l, reduce_mod(l, n), IntMatrix::identity(r).scaled(n), IntMatrix::identity(r)};
}

ShortExactSequence augmentation_sequence(const GammaSet& x, const GammaModule& a) {
  Submodule k = augmentation_kernel(x, a);
  std::size_t r = a.num_generators();
  IntMatrix sum(r, r * x.size());
  for (std::size_t p = 0; p < x.size(); ++p) sum.set_block(0, p * r, IntMatrix::identity(r));
  return {k.module, induced_module(x, a), a, k.inclusion, sum};
}

}  // namespace

TEST_CASE("Tate groups in low degrees") {
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  GammaModule sign = sign_lattice(c2, {0});
  CHECK(tate_cohomology(sign, -1).group().describe() == "Z/2");
  CHECK(tate_cohomology(sign, 0).group().is_trivial());
  GammaModule z = GammaModule::trivial_cyclic(c2, 0);
  CHECK(tate_cohomology(z, 0).group().describe() == "Z/2");
  CHECK(tate_cohomology(z, -1).group().is_trivial());
  CHECK(tate_cohomology(z, 1).group().is_trivial());
  CHECK(tate_cohomology(z, 2).group().describe() == "Z/2");
  CHECK(group_cohomology(z, 0).group().describe() == "Z");
  CHECK_THROWS(tate_cohomology(z, -2));
  CHECK_THROWS(tate_cohomology(z, 5));
  CHECK_THROWS(group_cohomology(z, -1));

  FiniteGroup one;
  for (const auto& m : {GammaModule::trivial_cyclic(one, 0), GammaModule::trivial_cyclic(one, 6)})
    for (int i = -1; i <= 3; ++i) CHECK(tate_cohomology(m, i).group().is_trivial());

  // S3 with trivial Z: H^2 = Hom(S3, Q/Z) = Z/2, Tate H^0 = Z/6
  GammaModule zs3 = GammaModule::trivial_cyclic(named_group("S3"), 0);
  CHECK(tate_cohomology(zs3, 0).group().describe() == "Z/6");
  CHECK(tate_cohomology(zs3, 2).group().describe() == "Z/2");
  // C2 x C2 with trivial Z: H^2 = Z/2 + Z/2, H^3 = Z/2 (Schur multiplier)
  GammaModule zk = GammaModule::trivial_cyclic(named_group("C2xC2"), 0);
  CHECK(tate_cohomology(zk, 2).group().describe() == "Z/2 + Z/2");
  CHECK(tate_cohomology(zk, 3).group().describe() == "Z/2");
}

TEST_CASE("low degrees against enumeration") {
  for (const char* name : {"C2", "C3", "C4", "C2xC2", "S3", "C6"}) {
    FiniteGroup g = named_group(name);
    for (const auto& m : finite_corpus(g, 64)) {
      oracle::Table t(m);
      CHECK(tate_cohomology(m, -1).group().order() == oracle::tate_minus1_order(t));
      CHECK(tate_cohomology(m, 0).group().order() == oracle::tate0_order(t));
      if (m.group().order() <= 16) CHECK(tate_cohomology(m, 1).group().order() == oracle::h1_order(g, t));
    }
  }
}

TEST_CASE("cohomology is annihilated by the group order") {
  for (const char* name : {"C2", "C3", "C4", "C2xC2", "S3", "D4", "C6"}) {
    FiniteGroup g = named_group(name);
    std::vector<GammaModule> mods = lattice_catalog(g);
    for (const auto& m : finite_corpus(g, 64)) mods.push_back(m);
    for (const auto& m : mods)
      for (int i = -1; i <= 3; ++i) {
        if (g.order() == 8 && i == 3 && m.num_generators() > 2) continue;
        CohomologyGroup c = tate_cohomology(m, i);
        const FinAbGroup& h = c.group();
        REQUIRE(h.is_finite());
        CHECK(divides(h.exponent(), Int(g.order())));
      }
  }
}

TEST_CASE("periodicity for cyclic groups") {
  for (int n : {2, 3, 4, 5, 6}) {
    FiniteGroup g = FiniteGroup::cyclic(n);
    std::vector<GammaModule> mods = lattice_catalog(g);
    for (const auto& m : finite_corpus(g, 64)) mods.push_back(m);
    for (const auto& m : mods)
      for (int i = -1; i <= 1; ++i)
        CHECK(tate_cohomology(m, i).group().isomorphic(tate_cohomology(m, i + 2).group()));
  }
}

TEST_CASE("small resolution agrees with the bar resolution") {
  for (const char* name : {"C2", "C3", "C4", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(name);
    std::size_t top = g.order() <= 4 ? 3 : 2;
    BarResolution bar(g, top + 1);
    for (const auto& m : lattice_catalog(g))
      for (std::size_t k = 1; k <= top; ++k)
        CHECK(cohomology_via(bar, m, static_cast<int>(k)).group().isomorphic(
            tate_cohomology(m, static_cast<int>(k)).group()));
  }
}

TEST_CASE("small resolutions are exact") {
  for (const char* name : {"C2", "C4", "C2xC2", "S3", "D4", "C2xC6"}) {
    FiniteGroup g = named_group(name);
    auto r = standard_resolution(g);
    for (std::size_t k = 1; k < r->max_degree(); ++k) {
      const IntMatrix& dk = r->boundary_matrix(k);
      const IntMatrix& dk1 = r->boundary_matrix(k + 1);
      CHECK((dk * dk1).is_zero());
      // image of d_{k+1} is all of ker d_k
      CHECK(same_subgroup(FinAbGroup::free(dk.cols()), kernel_basis(dk), dk1));
    }
  }
}

TEST_CASE("functoriality") {
  FiniteGroup c4 = FiniteGroup::cyclic(4);
  GammaModule m = reduce_mod(rotation_lattice(c4), 4);
  for (int i = -1; i <= 3; ++i) {
    CohomologyMap id = module_map_on_cohomology(m, m, IntMatrix::identity(2), i);
    CHECK(id.map.matrix == identity_map(id.source.group()).matrix);
  }
  CHECK_THROWS(module_map_on_cohomology(m, m, IntMatrix::from_rows({{1, 0}, {0, 0}}), 0));

  Subgroup e = make_subgroup(c4, {0});
  for (int i = 1; i <= 3; ++i) CHECK(is_zero_map(restriction(m, e, i).map));

  // inflation C2 -> C4 on Z/2: Hom(C2, Z/2) -> Hom(C4, Z/2) is injective, both Z/2
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  CohomologyMap inf = inflation(GammaModule::trivial_cyclic(c2, 2), c4, {0, 1, 0, 1}, 1);
  CHECK(inf.source.group().describe() == "Z/2");
  CHECK(inf.target.group().describe() == "Z/2");
  CHECK(is_injective(inf.map));
  // on H^2 the same inflation is zero: the extension C4 of C2 by C2 is nonsplit
  CHECK(is_zero_map(inflation(GammaModule::trivial_cyclic(c2, 2), c4, {0, 1, 0, 1}, 2).map));
  CHECK_THROWS(inflation(GammaModule::trivial_cyclic(c2, 2), c4, {0, 1, 0, 1}, 0));
}

TEST_CASE("functoriality composes") {
  std::mt19937 rng(2024);
  for (const char* name : {"C3", "C4", "S3"}) {
    FiniteGroup g = named_group(name);
    auto lats = lattice_catalog(g);
    for (int t = 0; t < 6; ++t) {
      const GammaModule& a = lats[rng() % lats.size()];
      const GammaModule& b = lats[rng() % lats.size()];
      const GammaModule& c = lats[rng() % lats.size()];
      IntMatrix f = random_equivariant_map(rng, a, b, 2);
      IntMatrix h = random_equivariant_map(rng, b, c, 2);
      for (int i = -1; i <= 2; ++i) {
        GroupMap hf = module_map_on_cohomology(a, c, h * f, i).map;
        GroupMap composed = compose(module_map_on_cohomology(b, c, h, i).map, module_map_on_cohomology(a, b, f, i).map);
        CHECK(hf.matrix == composed.matrix);
      }
    }
  }
}

TEST_CASE("inflation-restriction is exact in degree 1") {
  struct Case {
    const char* big;
    std::vector<std::size_t> normal;
  };
  for (const Case& c : {Case{"C4", {0, 2}}, Case{"C2xC2", {0, 1}}, Case{"S3", {0, 3, 4}}, Case{"C6", {0, 3}}}) {
    FiniteGroup g = named_group(c.big);
    REQUIRE(g.is_normal(c.normal));
    QuotientGroup q = make_quotient(g, c.normal);
    Subgroup h = make_subgroup(g, c.normal);
    for (const auto& l : lattice_catalog(q.group))
      for (int n : {0, 2, 3}) {
        GammaModule m = n ? reduce_mod(l, n) : l;
        CohomologyMap inf = inflation(m, g, q.proj, 1);
        CohomologyMap res = restriction(inflate_module(m, g, q.proj), h, 1);
        CHECK(is_injective(inf.map));
        CHECK(exact_at(inf.map, res.map));
      }
  }
}

TEST_CASE("restriction on degree -1 and 0") {
  FiniteGroup s3 = named_group("S3");
  Subgroup c3 = make_subgroup(s3, s3.generate({3}));
  for (const auto& m : finite_corpus(s3, 64)) {
    // res followed by corestriction is multiplication by the index; here only check well-definedness
    CHECK_NOTHROW(restriction(m, c3, -1));
    CHECK_NOTHROW(restriction(m, c3, 0));
  }
  // Z trivial: res: Z/6 -> Z/3 on Tate H^0 is onto
  CohomologyMap r = restriction(GammaModule::trivial_cyclic(s3, 0), c3, 0);
  CHECK(r.source.group().describe() == "Z/6");
  CHECK(r.target.group().describe() == "Z/3");
  CHECK(is_surjective(r.map));
  // on H^2(Z) = Hom(-, Q/Z), restricting S3 -> C3 kills the sign character
  CHECK(is_zero_map(restriction(GammaModule::trivial_cyclic(s3, 0), c3, 2).map));
}

TEST_CASE("Shapiro decomposition") {
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  for (int i = -1; i <= 3; ++i) {
    ShapiroDecomposition d = shapiro_decompose(GammaSet::regular(c2), GammaModule::trivial_cyclic(c2, 2), i);
    CHECK(d.whole.group().is_trivial());
  }
  // fixed points only: A[X] is a sum of copies of A
  ShapiroDecomposition fixed = shapiro_decompose(GammaSet::trivial(c2, 2), GammaModule::trivial_cyclic(c2, 0), 0);
  CHECK(fixed.bijective);
  CHECK(fixed.whole.group().describe() == "Z/2 + Z/2");

  FiniteGroup s3 = named_group("S3");
  ShapiroDecomposition d = shapiro_decompose(GammaSet::coset_space(s3, {0, 1}), GammaModule::trivial_cyclic(s3, 2), 1);
  CHECK(d.whole.group().describe() == "Z/2");
  CHECK(d.parts.size() == 1);
  CHECK(hom_group(FinAbGroup::standard({2}), FinAbGroup::standard({2})).group.isomorphic(d.parts[0].group()));
  CHECK(d.bijective);

  // corpus: orders multiply and the map is a bijection on enumerated elements
  std::size_t instances = 0;
  std::mt19937 rng(99);
  for (const char* name : {"C2", "C3", "C4", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(name);
    auto subs = g.subgroups();
    for (int trial = 0; trial < 6; ++trial) {
      GammaSet x = GammaSet::coset_space(g, subs[rng() % subs.size()]);
      if (trial % 2) x = GammaSet::disjoint_union(x, GammaSet::coset_space(g, subs[rng() % subs.size()]));
      if (x.size() > 6) continue;
      auto lats = lattice_catalog(g);
      GammaModule a = reduce_mod(lats[rng() % lats.size()], 2 + rng() % 3);
      for (int i = -1; i <= 2; ++i) {
        ShapiroDecomposition s = shapiro_decompose(x, a, i);
        Int prod = 1;
        for (const auto& p : s.parts) prod *= p.group().order();
        CHECK(s.whole.group().order() == prod);
        CHECK(s.bijective);
        if (prod <= 64) {
          CHECK(elementwise_bijective(s.forward));
          REQUIRE(s.backward);
          CHECK(compose(*s.backward, s.forward).matrix == identity_map(s.whole.group()).matrix);
        }
        ++instances;
      }
    }
  }
  CHECK(instances >= 20);
}

TEST_CASE("connecting maps for multiplication by n") {
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  ShortExactSequence s = multiplication_sequence(GammaModule::trivial_cyclic(c2, 0), 2);
  validate_ses(s);
  // Ĥ^1(C2, Z) = 0, so delta out of Ĥ^0(Z/2) has zero target
  CHECK(tate_cohomology(s.a, 1).group().is_trivial());
  for (int i : {-1, 1}) {
    CohomologyGroup hc = tate_cohomology(s.c, i), ha = tate_cohomology(s.a, i + 1);
    CHECK(hc.group().describe() == "Z/2");
    CHECK(ha.group().describe() == "Z/2");
    CHECK(is_surjective(connecting_map(s, hc, ha)));
  }
  CHECK(long_exact_sequence(s).all_exact());

  ShortExactSequence bad = s;
  bad.p = IntMatrix::from_rows({{0}});
  CHECK_THROWS(validate_ses(bad));
  bad = s;
  bad.i = IntMatrix::from_rows({{4}});
  CHECK_THROWS(validate_ses(bad));
}

TEST_CASE("split sequences have zero connecting maps") {
  for (const char* name : {"C2", "C3", "S3"}) {
    FiniteGroup g = named_group(name);
    auto lats = lattice_catalog(g);
    GammaModule a = reduce_mod(lats.back(), 2), c = reduce_mod(lats.front(), 3);
    std::size_t ra = a.num_generators(), rc = c.num_generators();
    IntMatrix i = IntMatrix::vcat(IntMatrix::identity(ra), IntMatrix(rc, ra));
    IntMatrix p = IntMatrix::hcat(IntMatrix(rc, ra), IntMatrix::identity(rc));
    ShortExactSequence s{a, direct_sum(a, c), c, i, p};
    validate_ses(s);
    for (int k = -1; k <= 2; ++k)
      CHECK(is_zero_map(connecting_map(s, tate_cohomology(c, k), tate_cohomology(a, k + 1))));
    CHECK(long_exact_sequence(s).all_exact());
  }
}

TEST_CASE("cohomologically trivial kernel gives zero connecting maps") {
  for (const char* name : {"C2", "C3", "S3"}) {
    FiniteGroup g = named_group(name);
    ShortExactSequence s = multiplication_sequence(regular_lattice(g), 3);
    for (int k = -1; k <= 2; ++k) {
      CohomologyGroup ha = tate_cohomology(s.a, k + 1);
      CHECK(ha.group().is_trivial());
      CHECK(is_zero_map(connecting_map(s, tate_cohomology(s.c, k), ha)));
    }
  }
}

TEST_CASE("long exact sequences over a corpus") {
  std::size_t checked = 0;
  for (const char* name : {"C2", "C3", "C4", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(name);
    for (const auto& l : lattice_catalog(g)) {
      if (l.num_generators() > 3) continue;
      for (int n : {2, 3}) {
        LongExactReport r = long_exact_sequence(multiplication_sequence(l, n), -1, 2);
        CHECK(r.all_exact());
        for (std::size_t i = 0; i + 1 < r.maps.size(); ++i) CHECK(is_zero_map(compose(r.maps[i + 1], r.maps[i])));
        ++checked;
      }
    }
    for (const auto& h : g.subgroups()) {
      GammaSet x = GammaSet::disjoint_union(GammaSet::coset_space(g, h), GammaSet::trivial(g, 1));
      if (x.size() > 4) continue;
      ShortExactSequence s = augmentation_sequence(x, GammaModule::trivial_cyclic(g, 2));
      validate_ses(s);
      CHECK(long_exact_sequence(s, -1, 2).all_exact());
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("Cech dictionary") {
  std::mt19937 rng(31337);
  for (const char* name : {"C2", "C3", "S3"}) {
    FiniteGroup g = named_group(name);
    for (const auto& l : lattice_catalog(g)) {
      GammaModule m = l.num_generators() <= 2 ? l : reduce_mod(l, 5);
      // n = 1: constants on Gamma are the 0-cochains
      CochainTable f0 = random_table(rng, m, 0);
      CochainTable c1 = to_cech(m, f0, 1);
      CHECK(is_equivariant_cech(m, c1, 1));
      CHECK(tables_equal(m, to_group(m, c1, 1), f0));
      for (std::size_t k : {0, 1, 2}) {
        std::size_t n = k + 1;
        CochainTable f = random_table(rng, m, k);
        CochainTable c = to_cech(m, f, n);
        CHECK(is_equivariant_cech(m, c, n));
        CHECK(tables_equal(m, to_group(m, c, n), f));
        CHECK(tables_equal(m, to_cech(m, to_group(m, c, n), n), c));
        CHECK(tables_equal(m, to_cech(m, group_differential(m, f, k), n + 1), cech_differential(m, c, n)));
        // coboundaries go to coboundaries and are cocycles on both sides
        if (k <= 1) {
          CochainTable b = group_differential(m, f, k);
          CHECK(tables_equal(m, group_differential(m, b, k + 1), CochainTable(tuple_count(g, k + 2), IntVector(m.num_generators(), 0))));
          CochainTable cb = to_cech(m, b, n + 1);
          CHECK(tables_equal(m, cech_differential(m, cb, n + 1), to_cech(m, group_differential(m, b, k + 1), n + 2)));
        }
      }
      // perturbing one value breaks equivariance whenever the perturbation is nonzero in M
      CochainTable c = to_cech(m, random_table(rng, m, 1), 2);
      IntVector bump = unit(m.num_generators(), 0);
      if (!m.is_zero(bump)) {
        for (std::size_t i = 0; i < bump.size(); ++i) c[1][i] += bump[i];
        CHECK(!is_equivariant_cech(m, c, 2));
      }
    }
  }
}

TEST_CASE("inhomogeneous cocycles from the small resolution") {
  for (const char* name : {"C2", "C3", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(name);
    for (const auto& l : lattice_catalog(g)) {
      std::size_t top = g.order() <= 4 ? 2 : 1;
      BarResolution bar(g, top + 1);
      for (std::size_t k = 1; k <= top; ++k) {
        CohomologyGroup small = tate_cohomology(l, static_cast<int>(k));
        CohomologyGroup barh = cohomology_via(bar, l, static_cast<int>(k));
        std::vector<IntVector> cols;
        for (std::size_t j = 0; j < small.group().num_factors(); ++j) {
          CochainTable f = inhomogeneous_cocycle(l, k, small.represent(unit(small.group().num_factors(), j)));
          CHECK(tables_equal(l, group_differential(l, f, k), CochainTable(tuple_count(g, k + 1), IntVector(l.num_generators(), 0))));
          IntVector flat;
          for (const auto& v : f) flat.insert(flat.end(), v.begin(), v.end());
          cols.push_back(barh.classify(flat));
        }
        IntMatrix mat = cols.empty() ? IntMatrix(barh.group().num_factors(), 0)
                                     : IntMatrix::from_columns(cols, barh.group().num_factors());
        CHECK(is_isomorphism(make_group_map(small.group(), barh.group(), mat)));
      }
    }
  }
}

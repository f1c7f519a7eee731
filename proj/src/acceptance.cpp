#include "rif/acceptance.hpp"

#include "rif/catalog.hpp"
#include "rif/corpus.hpp"
#include "rif/smith.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace rif {

namespace {

struct Checker {
  CriterionResult& r;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++r.failure_count;
    if (r.failures.size() < 8) r.failures.push_back(what);
  }
};

bool maps_equal(const GroupMap& f, const GroupMap& g) {
  if (f.matrix.rows() != g.matrix.rows() || f.matrix.cols() != g.matrix.cols()) return false;
  for (std::size_t j = 0; j < f.matrix.cols(); ++j)
    if (!is_zero(f.target.reduce((f.matrix - g.matrix).column(j)))) return false;
  return true;
}

bool elementwise_bijective(const GroupMap& f) {
  std::set<IntVector> seen;
  bool ok = true;
  f.source.for_each_element([&](const IntVector& x) {
    ok = ok && seen.insert(f.target.reduce(apply_map(f, x))).second;
    return ok;
  });
  return ok && Int(seen.size()) == f.target.order();
}

// ---------------------------------------------------------------------------

void psi_isomorphism(CriterionResult& r) {
  Checker c{r};
  for (const auto& inst : psi_corpus(2024)) {
    const Level& l = inst.level;
    c.expect(l.group().order() <= 8 && l.places().size() <= 6 && inst.a.group().exponent() <= 8,
             inst.name + ": outside the size bounds");
    c.expect(l.modulus() <= 8 && l.modulus() % inst.a.group().exponent() == 0, inst.name + ": exp(A) does not divide n");
    c.expect(check_place_conditions(l.system).all(), inst.name + ": place conditions fail");
    PsiReport p = psi_map(l, inst.a);
    c.expect(p.bijective && p.inverse_verified, inst.name + ": Psi not inverted");
    c.expect(p.dotted_onto && is_injective(p.psi_dotted), inst.name + ": restricted Psi misses the section part");
    c.expect(p.tate_surjective, inst.name + ": not onto Tate H^-1");
    ++r.instances;
  }
}

void transition_coherence(CriterionResult& r) {
  Checker c{r};
  std::size_t triggered = 0;
  for (const auto& f : tower_corpus()) {
    const std::string name = f.target.group().name() + " over " + std::to_string(f.source.group().order()) +
                             " n=" + to_string(f.source.modulus()) + " m=" + to_string(f.target.modulus());
    LevelMap g = tower_extension(f);
    LevelMap gf = compose(g, f);
    validate_level_map(gf);
    TransitionReport tf = level_transition(f), tg = level_transition(g), tgf = level_transition(gf);
    c.expect(tf.equivariant && tg.equivariant && tgf.equivariant, name + ": transition not equivariant");
    c.expect(maps_equal(tgf.map, compose(tg.map, tf.map)), name + ": transitions do not compose");
    for (const Level* l : {&f.source, &f.target, static_cast<const Level*>(&g.target)}) {
      LevelSequence s = level_sequence(*l);
      c.expect(s.exact, name + ": level sequence not exact: " + s.failure);
    }
    for (const LevelMap* h : {&f, static_cast<const LevelMap*>(&g), static_cast<const LevelMap*>(&gf)}) {
      CompanionTransition ct = companion_transition(*h);
      if (ct.coefficients_vanish) {
        ++triggered;
        c.expect(ct.vanishes, name + ": companion transition survives its vanishing criterion");
      }
    }
    ++r.instances;
  }
  c.expect(triggered > 0, "no tower triggers the vanishing criterion");
}

void localization(CriterionResult& r) {
  Checker c{r};
  for (const char* gname : {"C2", "C3", "C4", "C2xC2", "S3", "C6", "D4"}) {
    FiniteGroup g = named_group(gname);
    const auto all = whole_group(g);
    std::vector<std::vector<std::size_t>> mids;
    for (const auto& h : g.subgroups())
      if (h.size() > 1 && h.size() < g.order() && mids.size() < 2) mids.push_back(h);
    const long long k = g.order() % 2 == 0 ? 2 : 3;
    for (const auto& y : lattice_catalog(g)) {
      if (y.num_generators() > 2) continue;
      IsogenyPair p = scaled_pair(y, k);
      std::vector<std::vector<std::vector<std::size_t>>> configs = {{all, {g.identity()}}};
      for (const auto& h : mids) configs.push_back({all, h});
      for (const auto& cfg : configs) {
        Level l = blocks_level(g, cfg, k);
        YbarGroup yb = ybar_group(p, l);
        for (std::size_t v : l.system.section) {
          const std::string name = std::string(gname) + " rank " + std::to_string(y.num_generators()) + " place " +
                                   std::to_string(v) + " of " + std::to_string(l.places().size());
          DecompositionData d = make_decomposition(l.places(), v);
          LvReport lv = l_v(p, l, yb, d);
          c.expect(lv.transversals_checked == all_transversals(g, d).size(), name + ": transversals not exhausted");
          c.expect(lv.independent, name + ": depends on the transversal");
          IntMatrix m = lv_matrix(p, l.places(), d);
          for (std::size_t j = 0; j < yb.iy.cols(); ++j)
            c.expect(lv.local.group.is_trivial_class(m * yb.iy.column(j)), name + ": I Y[S]_0 not killed");
          ++r.instances;
        }
      }
    }
  }
}

void torsion_characterization(CriterionResult& r) {
  Checker c{r};
  for (const auto& inst : pair_corpus()) {
    YbarGroup g = ybar_group(inst.pair, inst.level);
    const Subquotient tor = g.whole.torsion();
    c.expect(g.torsion_certified, inst.name + ": torsion certificate fails");
    c.expect(g.group.group().order() == tor.group().order(), inst.name + ": orders differ");
    for (std::size_t j = 0; j < g.group.numerator().cols(); ++j)
      c.expect(tor.contains(g.group.numerator().column(j)), inst.name + ": norm-killed element not torsion");
    const IntMatrix tl = tor.generator_lifts();
    for (std::size_t j = 0; j < tl.cols(); ++j)
      c.expect(g.group.contains(tl.column(j)), inst.name + ": torsion element not norm-killed");
    c.expect(g.dotted_certified, inst.name + ": dotted certificate fails");
    const std::size_t rank = g.rank;
    g.group.group().for_each_element([&](const IntVector& cls) {
      IntVector rep = g.dotted_representative(cls);
      bool on_section = true;
      for (std::size_t w = 0; w < inst.level.places().size(); ++w)
        if (!inst.level.system.in_section(w))
          for (std::size_t i = 0; i < rank; ++i) on_section = on_section && rep[w * rank + i] == 0;
      c.expect(on_section && g.group.contains(rep) && g.group.classify(rep) == g.group.group().reduce(cls),
               inst.name + ": no representative on the section");
      return true;
    });
    ++r.instances;
  }
}

void sigma(CriterionResult& r) {
  Checker c{r};
  for (const auto& inst : pair_corpus()) {
    c.expect(check_place_conditions(inst.level.system).all(), inst.name + ": place conditions fail");
    SigmaReport s = sigma_exactness(inst.pair, inst.level, 512);
    if (s.out_of_budget) continue;
    c.expect(s.composite_zero, inst.name + ": composite nonzero");
    c.expect(s.exact && s.enumerated, inst.name + ": image differs from kernel");
    ++r.instances;
  }
}

void hypercohomology_sequences(CriterionResult& r) {
  Checker c{r};
  for (const auto& [name, cx] : complex_corpus(4242)) {
    c.expect(les_check(cx, LesKind::First).all_exact(), name + ": first sequence not exact");
    c.expect(les_check(cx, LesKind::Second).all_exact(), name + ": second sequence not exact");
    // H^0 cocycles are exactly the fixed vectors killed by f.
    IntMatrix stacked = cx.map;
    for (std::size_t g = 0; g < cx.degree0.gamma().order(); ++g)
      stacked = IntMatrix::vcat(stacked, cx.degree0.act(g) - IntMatrix::identity(cx.degree0.num_generators()));
    const IntMatrix fixed = kernel_basis(stacked);
    HyperCohomology h0 = hypercohomology(cx, 0);
    LinearSolver in_fixed(fixed), in_h0(h0.sq.numerator());
    bool same = h0.group().torsion_factors().empty() && h0.group().rank() == fixed.cols();
    for (std::size_t j = 0; j < fixed.cols(); ++j) same = same && in_h0.solvable(fixed.column(j));
    for (std::size_t j = 0; j < h0.sq.numerator().cols(); ++j) same = same && in_fixed.solvable(h0.sq.numerator().column(j));
    c.expect(same, name + ": H^0 differs from the fixed part of ker f");
    ++r.instances;
  }
}

void dual_model(CriterionResult& r) {
  Checker c{r};
  for (const auto& [name, cx] : complex_corpus(4242)) {
    if (!is_isogeny(cx)) continue;
    DualModel d{cx, dual_model_threshold(cx)};
    FinAbGroup h2 = hypercohomology(cx, 2).group();
    c.expect(h2.is_finite() && dual_model_cohomology(d, 1).reduced.group().order() == h2.order(),
             name + ": |reduced H^1| differs from |H^2|");
    c.expect(stabilization_audit(d).passed(), name + ": no stabilization under doubling");
    ++r.instances;
  }
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<int> d(-20, 20);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

void foundations(CriterionResult& r) {
  Checker c{r};
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<int> sz(1, 8);
  for (int t = 0; t < 100; ++t) {
    IntMatrix a = random_matrix(rng, sz(rng), sz(rng));
    SmithForm f1 = smith_normal_form(a, SmithStrategy::MinPivot);
    SmithForm f2 = smith_normal_form(a, SmithStrategy::GcdSweep);
    c.expect(f1.U * a * f1.V == f1.D && f2.U * a * f2.V == f2.D, "SNF transforms do not reproduce D");
    c.expect(f1.D == f2.D, "SNF strategies disagree");
  }
  std::size_t shapiro = 0;
  for (const char* name : {"C2", "C3", "C4", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(name);
    auto subs = g.subgroups();
    for (int trial = 0; trial < 4; ++trial) {
      GammaSet x = GammaSet::coset_space(g, subs[rng() % subs.size()]);
      if (trial % 2) x = GammaSet::disjoint_union(x, GammaSet::coset_space(g, subs[rng() % subs.size()]));
      if (x.size() > 6) continue;
      auto lats = lattice_catalog(g);
      GammaModule a = reduce_mod(lats[rng() % lats.size()], 2 + rng() % 3);
      for (int i = -1; i <= 2; ++i) {
        ShapiroDecomposition s = shapiro_decompose(x, a, i);
        Int prod = 1;
        for (const auto& p : s.parts) prod *= p.group().order();
        c.expect(s.whole.group().order() == prod, std::string(name) + ": Shapiro orders differ");
        c.expect(s.bijective, std::string(name) + ": Shapiro map not bijective");
        if (prod <= 64) {
          c.expect(elementwise_bijective(s.forward), std::string(name) + ": Shapiro map not bijective on elements");
          c.expect(s.backward && maps_equal(compose(*s.backward, s.forward), identity_map(s.whole.group())),
                   std::string(name) + ": Shapiro inverse fails");
        }
        ++shapiro;
      }
    }
  }
  c.expect(shapiro >= 20, "fewer than 20 Shapiro instances");
  std::uniform_int_distribution<int> entry(-5, 5);
  for (const char* name : {"C2", "C3", "S3"}) {
    FiniteGroup g = named_group(name);
    for (const auto& l : lattice_catalog(g)) {
      GammaModule m = l.num_generators() <= 2 ? l : reduce_mod(l, 5);
      for (std::size_t k : {0, 1, 2}) {
        CochainTable f(tuple_count(g, k), IntVector(m.num_generators()));
        for (auto& v : f)
          for (auto& e : v) e = entry(rng);
        const std::size_t n = k + 1;
        CochainTable cf = to_cech(m, f, n);
        CochainTable df = group_differential(m, f, k);
        c.expect(is_equivariant_cech(m, cf, n), std::string(name) + ": Cech cochain not equivariant");
        c.expect(tables_equal(m, to_cech(m, df, n + 1), cech_differential(m, cf, n)),
                 std::string(name) + ": dictionary does not commute with d");
        c.expect(tables_equal(m, to_group(m, cf, n), f), std::string(name) + ": dictionary not invertible");
        if (k <= 1) {
          CochainTable zero(tuple_count(g, k + 2), IntVector(m.num_generators(), Int(0)));
          c.expect(tables_equal(m, group_differential(m, df, k + 1), zero), std::string(name) + ": d d != 0");
          c.expect(tables_equal(m, cech_differential(m, to_cech(m, df, n + 1), n + 1), to_cech(m, zero, n + 2)),
                   std::string(name) + ": coboundary not a Cech cocycle");
        }
      }
    }
  }
  r.instances = shapiro;
}

void negative_controls(CriterionResult& r) {
  Checker c{r};
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  // Two places swapped by C2: the nontrivial element fixes no dotted place.
  PlaceSystem swapped = blocks_system(c2, {{0}}, 2);
  ConditionReport cond = check_place_conditions(swapped);
  c.expect(!cond.dotted_fixed && cond.dotted_fixed_violators == std::vector<std::size_t>{1},
           "missing dotted fixed point not detected");
  bool rejected = false;
  try {
    make_level(swapped);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  c.expect(rejected, "level accepted without the override");
  Level l = make_level(swapped, true);
  PsiReport p = psi_map(l, GammaModule::trivial_cyclic(c2, 2));
  c.expect(!p.tate_surjective, "Psi onto Tate H^-1 did not fail on the negative control");
  ++r.instances;
}

struct CriterionLimits {
  const char* title;
  std::size_t required;
  double limit;
  std::function<void(CriterionResult&)> run;
};

const CriterionLimits& limits_of(int id) {
  static const std::vector<CriterionLimits> all = {
      {"Psi isomorphism", 25, 60, psi_isomorphism},
      {"transition coherence", 10, 30, transition_coherence},
      {"localization well-definedness", 20, 60, localization},
      {"torsion characterization", 15, 60, torsion_characterization},
      {"Sigma exactness", 10, 120, sigma},
      {"hypercohomology sequences", 15, 60, hypercohomology_sequences},
      {"dual-model comparisons", 5, 60, dual_model},
      {"foundations", 20, 60, foundations},
      {"negative controls", 1, 10, negative_controls},
  };
  if (id < 1 || id > kCriteria) throw std::invalid_argument("no criterion " + std::to_string(id));
  return all[static_cast<std::size_t>(id - 1)];
}

}  // namespace

CriterionResult run_criterion(int id) {
  const CriterionLimits& s = limits_of(id);
  CriterionResult r;
  r.id = id;
  r.title = s.title;
  r.required = s.required;
  r.limit_seconds = s.limit;
  auto start = std::chrono::steady_clock::now();
  try {
    s.run(r);
  } catch (const std::exception& e) {
    ++r.failure_count;
    r.failures.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "criterion " << r.id << ' ' << (r.passed() ? "PASS" : "FAIL") << "  " << r.title << "  instances="
     << r.instances << '/' << r.required << "  time=" << r.seconds << "s/" << r.limit_seconds << 's';
  if (r.failure_count) os << "  failures=" << r.failure_count << "  first: " << r.failures.front();
  return os.str();
}

}  // namespace rif

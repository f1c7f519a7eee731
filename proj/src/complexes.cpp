#include "rif/complexes.hpp"

#include "rif/resolution.hpp"

#include <stdexcept>
#include <string>

namespace rif {

namespace {

void check_degree(int r, int hi) {
  if (r < 0 || r > hi) throw std::invalid_argument("degree " + std::to_string(r) + " out of range");
}

std::size_t cochain_dim(const Resolution& res, const GammaModule& m, int k) {
  return k < 0 ? 0 : m.num_generators() * res.rank(static_cast<std::size_t>(k));
}

IntMatrix on_cochains(const Resolution& res, const IntMatrix& f, int k) {
  if (k < 0) return IntMatrix(0, 0);
  return IntMatrix::repeat_diagonal(f, res.rank(static_cast<std::size_t>(k)));
}

// First dim coordinates of a solution of [a | b] z = x.
std::optional<IntVector> solve_first(const IntMatrix& a, const IntMatrix& b, const IntVector& x) {
  LinearSolver s(IntMatrix::hcat(a, b));
  auto z = s.solve(x);
  if (!z) return std::nullopt;
  return IntVector(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(a.cols()));
}

GroupMap zero_map(const FinAbGroup& a, const FinAbGroup& b) {
  return make_group_map(a, b, IntMatrix(b.num_factors(), a.num_factors()));
}

}  // namespace

void validate_complex(const LatticeComplex& c) {
  if (!(c.degree0.gamma().table() == c.degree1.gamma().table()))
    throw std::invalid_argument("terms are over different groups");
  if (c.map.rows() != c.degree1.num_generators() || c.map.cols() != c.degree0.num_generators())
    throw std::invalid_argument("map has the wrong shape");
  if (!is_module_map(c.degree0, c.degree1, c.map)) throw std::invalid_argument("map is not equivariant");
}

IntMatrix hyper_relations(const LatticeComplex& c, std::size_t r) {
  auto res = standard_resolution(c.degree0.gamma());
  IntMatrix a = cochain_relations(*res, c.degree0, r);
  IntMatrix b = r ? cochain_relations(*res, c.degree1, r - 1) : IntMatrix(0, 0);
  return IntMatrix::block_diagonal({a, b});
}

IntMatrix hyper_differential(const LatticeComplex& c, std::size_t r) {
  auto res = standard_resolution(c.degree0.gamma());
  const int k = static_cast<int>(r);
  const std::size_t x0 = cochain_dim(*res, c.degree0, k), y0 = cochain_dim(*res, c.degree1, k - 1);
  const std::size_t x1 = cochain_dim(*res, c.degree0, k + 1), y1 = cochain_dim(*res, c.degree1, k);
  IntMatrix d(x1 + y1, x0 + y0);
  d.set_block(0, 0, cochain_differential(*res, c.degree0, r));
  d.set_block(x1, 0, on_cochains(*res, c.map, k));
  if (r > 0) d.set_block(x1, x0, cochain_differential(*res, c.degree1, r - 1).scaled(-1));
  return d;
}

HyperCohomology hypercohomology(const LatticeComplex& c, int r) {
  check_degree(r, 4);
  validate_complex(c);
  auto res = standard_resolution(c.degree0.gamma());
  const std::size_t k = static_cast<std::size_t>(r);
  HyperCohomology h;
  h.degree = r;
  h.dim0 = cochain_dim(*res, c.degree0, r);
  h.dim1 = cochain_dim(*res, c.degree1, r - 1);
  IntMatrix rel = hyper_relations(c, k);
  IntMatrix z = solution_lattice(hyper_differential(c, k), hyper_relations(c, k + 1), rel.rows());
  IntMatrix b = k ? hyper_differential(c, k - 1) : IntMatrix(rel.rows(), 0);
  h.sq = Subquotient(rel, z, b);
  return h;
}

Submodule complex_kernel(const LatticeComplex& c) {
  return kernel_submodule(c.degree0, c.map, c.degree1.relations());
}

GammaModule complex_cokernel(const LatticeComplex& c) { return quotient_module(c.degree1, c.map); }

LongExactReport les_check(const LatticeComplex& c, LesKind kind, int hi) {
  check_degree(hi, 3);
  validate_complex(c);
  auto res = standard_resolution(c.degree0.gamma());
  LongExactReport out;
  auto push = [&](std::string name, const FinAbGroup& g) { out.nodes.push_back({std::move(name), g, false, false}); };

  if (kind == LesKind::First) {
    // 0 -> H^0(C) -> H^0(T) -> H^0(U) -> H^1(C) -> ... -> H^hi(U)
    std::vector<HyperCohomology> hc;
    std::vector<CohomologyGroup> ht, hu;
    for (int r = 0; r <= hi; ++r) {
      hc.push_back(hypercohomology(c, r));
      ht.push_back(cohomology_via(*res, c.degree0, r));
      hu.push_back(cohomology_via(*res, c.degree1, r));
    }
    for (int r = 0; r <= hi; ++r) {
      const HyperCohomology& h = hc[static_cast<std::size_t>(r)];
      const CohomologyGroup& t = ht[static_cast<std::size_t>(r)];
      const CohomologyGroup& u = hu[static_cast<std::size_t>(r)];
      if (r > 0) {
        // [x] in H^{r-1}(U) -> [(0, x)]
        const CohomologyGroup& up = hu[static_cast<std::size_t>(r - 1)];
        IntMatrix inc(h.dim0 + h.dim1, h.dim1);
        inc.set_block(h.dim0, 0, IntMatrix::identity(h.dim1));
        out.maps.push_back(make_group_map(up.group(), h.group(), induced_map(up.sq, h.sq, inc)));
      }
      push("H^" + std::to_string(r) + "(C)", h.group());
      // [(x, y)] -> [x]
      IntMatrix proj(h.dim0, h.dim0 + h.dim1);
      proj.set_block(0, 0, IntMatrix::identity(h.dim0));
      out.maps.push_back(make_group_map(h.group(), t.group(), induced_map(h.sq, t.sq, proj)));
      push("H^" + std::to_string(r) + "(degree0)", t.group());
      out.maps.push_back(make_group_map(t.group(), u.group(), induced_map(t.sq, u.sq, on_cochains(*res, c.map, r))));
      push("H^" + std::to_string(r) + "(degree1)", u.group());
    }
    // One step past hi so the last degree1 node is checked too.
    HyperCohomology next = hypercohomology(c, hi + 1);
    const CohomologyGroup& up = hu.back();
    IntMatrix inc(next.dim0 + next.dim1, next.dim1);
    inc.set_block(next.dim0, 0, IntMatrix::identity(next.dim1));
    out.maps.push_back(make_group_map(up.group(), next.group(), induced_map(up.sq, next.sq, inc)));
    push("H^" + std::to_string(hi + 1) + "(C)", next.group());
  } else {
    // 0 -> H^0(K) -> H^0(C) -> H^-1(Q) = 0 -> H^1(K) -> H^1(C) -> H^0(Q) -> H^2(K) -> ...
    Submodule ker = complex_kernel(c);
    GammaModule cok = complex_cokernel(c);
    std::vector<CohomologyGroup> hk, hq;
    for (int r = 0; r <= hi + 1; ++r) hk.push_back(cohomology_via(*res, ker.module, r));
    for (int r = 0; r < hi; ++r) hq.push_back(cohomology_via(*res, cok, r));
    std::vector<HyperCohomology> hc;
    for (int r = 0; r <= hi; ++r) hc.push_back(hypercohomology(c, r));

    // H^{r-2}(Q) -> H^r(K): lift y, write dy = f x, then dx lies in C^r(K).
    auto connecting = [&](int r) {
      const CohomologyGroup& q = hq[static_cast<std::size_t>(r - 2)];
      const CohomologyGroup& k = hk[static_cast<std::size_t>(r)];
      const std::size_t s = static_cast<std::size_t>(r - 1);
      IntMatrix m(k.group().num_factors(), q.group().num_factors());
      IntMatrix f_s = on_cochains(*res, c.map, r - 1);
      IntMatrix rel_u = cochain_relations(*res, c.degree1, s);
      IntMatrix k_r = on_cochains(*res, ker.inclusion, r);
      IntMatrix rel_t = cochain_relations(*res, c.degree0, static_cast<std::size_t>(r));
      for (std::size_t j = 0; j < q.group().num_factors(); ++j) {
        IntVector y = q.represent(unit(q.group().num_factors(), j));
        IntVector dy = cochain_differential(*res, c.degree1, s - 1) * y;
        auto x = solve_first(f_s, rel_u, dy);
        if (!x) throw std::logic_error("connecting map: coboundary is not in the image of f");
        IntVector dx = cochain_differential(*res, c.degree0, s) * *x;
        auto w = solve_first(k_r, rel_t, dx);
        if (!w) throw std::logic_error("connecting map: value is not in the kernel");
        m.set_column(j, k.classify(*w));
      }
      return make_group_map(q.group(), k.group(), m);
    };

    for (int r = 0; r <= hi; ++r) {
      const CohomologyGroup& k = hk[static_cast<std::size_t>(r)];
      const HyperCohomology& h = hc[static_cast<std::size_t>(r)];
      if (r == 1) out.maps.push_back(zero_map(out.nodes.back().group, k.group()));
      if (r > 1) out.maps.push_back(connecting(r));
      push("H^" + std::to_string(r) + "(ker)", k.group());
      // [x] -> [(x, 0)]
      IntMatrix inc = IntMatrix::vcat(on_cochains(*res, ker.inclusion, r), IntMatrix(h.dim1, k.sq.ambient_dim()));
      out.maps.push_back(make_group_map(k.group(), h.group(), induced_map(k.sq, h.sq, inc)));
      push("H^" + std::to_string(r) + "(C)", h.group());
      if (r == 0) {
        out.maps.push_back(zero_map(h.group(), FinAbGroup()));
        push("H^-1(coker)", FinAbGroup());
      } else {
        // [(x, y)] -> [y bar]
        const CohomologyGroup& q = hq[static_cast<std::size_t>(r - 1)];
        IntMatrix proj(h.dim1, h.dim0 + h.dim1);
        proj.set_block(0, h.dim0, IntMatrix::identity(h.dim1));
        out.maps.push_back(make_group_map(h.group(), q.group(), induced_map(h.sq, q.sq, proj)));
        push("H^" + std::to_string(r - 1) + "(coker)", q.group());
      }
    }
    if (hi >= 1) {
      out.maps.push_back(connecting(hi + 1));
      push("H^" + std::to_string(hi + 1) + "(ker)", hk.back().group());
    }
  }

  out.nodes[0].checked = true;
  out.nodes[0].exact = is_injective(out.maps[0]);
  for (std::size_t n = 1; n + 1 < out.nodes.size(); ++n) {
    out.nodes[n].checked = true;
    out.nodes[n].exact = exact_at(out.maps[n - 1], out.maps[n]);
  }
  return out;
}

// ---------------------------------------------------------------------------

LatticeComplex reduce_complex(const LatticeComplex& c, const Int& n) {
  auto tensor = [&](const GammaModule& m) {
    const std::size_t g = m.num_generators();
    return GammaModule(m.gamma(), IntMatrix::hcat(m.relations(), IntMatrix::identity(g).scaled(n)), m.action());
  };
  return {tensor(c.degree0), tensor(c.degree1), c.map};
}

Int dual_model_threshold(const LatticeComplex& c) {
  FinAbGroup q = complex_cokernel(c).group();
  Int e = 1;
  for (const Int& f : q.torsion_factors()) e = lcm(e, f);
  return Int(c.degree0.gamma().order()) * e;
}

DualModelCohomology dual_model_cohomology(const DualModel& d, int r) {
  check_degree(r, 3);
  const Int order = d.base.degree0.gamma().order();
  if (d.modulus <= 0 || d.modulus % order != 0)
    throw std::invalid_argument("modulus must be a positive multiple of the group order");
  DualModelCohomology out;
  out.full = hypercohomology(reduce_complex(d.base, d.modulus), r);
  HyperCohomology integral = hypercohomology(d.base, r);
  const std::size_t dim = out.full.sq.ambient_dim();
  out.integral = make_group_map(integral.group(), out.full.group(),
                                induced_map(integral.sq, out.full.sq, IntMatrix::identity(dim)));
  out.reduced = Subquotient(out.full.sq.ambient_relations(), out.full.sq.numerator(),
                            IntMatrix::hcat(out.full.sq.denominator(), integral.sq.numerator()));
  return out;
}

bool StabilizationAudit::passed() const {
  for (bool b : orders_equal)
    if (!b) return false;
  for (bool b : reduced_iso)
    if (!b) return false;
  return above_threshold;
}

StabilizationAudit stabilization_audit(const DualModel& d, int lo, int hi) {
  StabilizationAudit out;
  out.threshold = dual_model_threshold(d.base);
  out.above_threshold = d.modulus % out.threshold == 0;
  DualModel twice{d.base, 2 * d.modulus};
  for (int r = lo; r <= hi; ++r) {
    DualModelCohomology a = dual_model_cohomology(d, r), b = dual_model_cohomology(twice, r);
    const FinAbGroup& ga = a.full.group();
    const FinAbGroup& gb = b.full.group();
    out.orders_equal.push_back(ga.isomorphic(gb));
    const std::size_t dim = a.full.sq.ambient_dim();
    GroupMap m = make_group_map(a.reduced.group(), b.reduced.group(),
                                induced_map(a.reduced, b.reduced, IntMatrix::identity(dim).scaled(2)));
    out.reduced_iso.push_back(is_isomorphism(m));
  }
  return out;
}

// ---------------------------------------------------------------------------

GroupMap hyper_restriction(const LatticeComplex& c, const std::vector<std::size_t>& subgroup, int r,
                           const HyperCohomology& global, const HyperCohomology& local) {
  const FiniteGroup& g = c.degree0.gamma();
  Subgroup h = make_subgroup(g, subgroup);
  auto rg = standard_resolution(g);
  auto rh = standard_resolution(h.group);
  const std::size_t k = static_cast<std::size_t>(r);
  auto alpha = lift_chain_map(*rh, *rg, h.embed, k);
  IntMatrix p0 = cochain_pullback(alpha[k], rg->rank(k), c.degree0);
  IntMatrix p1 = k ? cochain_pullback(alpha[k - 1], rg->rank(k - 1), c.degree1) : IntMatrix(0, 0);
  return make_group_map(global.group(), local.group(),
                        induced_map(global.sq, local.sq, IntMatrix::block_diagonal({p0, p1})));
}

Ker1Locus ker1_locus(const LatticeComplex& c, const std::vector<std::vector<std::size_t>>& family, int r) {
  check_degree(r, 3);
  validate_complex(c);
  const FiniteGroup& g = c.degree0.gamma();
  Ker1Locus out;
  out.global = hypercohomology(c, r);
  std::vector<FinAbGroup> parts;
  for (const auto& h : family) {
    if (!g.is_subgroup(h)) throw std::invalid_argument("family member is not a subgroup");
    Subgroup sub = make_subgroup(g, h);
    LatticeComplex lc{restrict_module(c.degree0, sub), restrict_module(c.degree1, sub), c.map};
    out.locals.push_back(hypercohomology(lc, r));
    out.restrictions.push_back(hyper_restriction(c, h, r, out.global, out.locals.back()));
    parts.push_back(out.locals.back().group());
  }
  if (family.empty()) {
    out.generators = IntMatrix::identity(out.global.group().num_factors());
  } else {
    DirectSum ds = direct_sum_of(parts);
    out.generators = kernel_generators(map_into_sum(out.global.group(), ds, out.restrictions));
  }
  out.group = subgroup_group(out.global.group(), out.generators);
  return out;
}

}  // namespace rif

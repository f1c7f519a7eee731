#include "rif/tate.hpp"

#include <stdexcept>

namespace rif {

namespace {

CohomologyGroup ordinary(const Resolution& r, const GammaModule& m, int degree) {
  if (degree < 0 || static_cast<std::size_t>(degree) + 1 > r.max_degree())
    throw std::invalid_argument("degree " + std::to_string(degree) + " out of range");
  const std::size_t k = static_cast<std::size_t>(degree);
  CohomologyGroup h;
  h.module = m;
  h.degree = degree;
  h.tate = false;
  h.copies = r.rank(k);
  IntMatrix rel = cochain_relations(r, m, k);
  IntMatrix z = solution_lattice(cochain_differential(r, m, k), cochain_relations(r, m, k + 1), rel.rows());
  IntMatrix b = k == 0 ? IntMatrix(rel.rows(), 0) : cochain_differential(r, m, k - 1);
  h.sq = Subquotient(rel, z, b);
  return h;
}

IntVector block(const IntVector& v, std::size_t i, std::size_t size) {
  return IntVector(v.begin() + static_cast<std::ptrdiff_t>(i * size),
                   v.begin() + static_cast<std::ptrdiff_t>((i + 1) * size));
}

IntVector solve_first(const LinearSolver& s, const IntVector& rhs, std::size_t n, const char* what) {
  auto x = s.solve(rhs);
  if (!x) throw std::invalid_argument(what);
  return IntVector(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace

CohomologyGroup tate_cohomology(const GammaModule& m, int degree) {
  if (degree < -1 || degree > 4) throw std::invalid_argument("Tate degree " + std::to_string(degree) + " out of range");
  if (degree >= 1) {
    CohomologyGroup h = ordinary(*standard_resolution(m.gamma()), m, degree);
    h.tate = true;
    return h;
  }
  CohomologyGroup h;
  h.module = m;
  h.degree = degree;
  h.copies = 1;
  if (degree == -1)
    h.sq = Subquotient(m.relations(), norm_kernel_generators(m), augmentation_submodule_generators(m));
  else
    h.sq = Subquotient(m.relations(), fixed_point_generators(m), norm_matrix(m));
  return h;
}

CohomologyGroup group_cohomology(const GammaModule& m, int degree) {
  if (degree < 0 || degree > 4) throw std::invalid_argument("degree " + std::to_string(degree) + " out of range");
  return ordinary(*standard_resolution(m.gamma()), m, degree);
}

CohomologyGroup cohomology_via(const Resolution& r, const GammaModule& m, int degree) { return ordinary(r, m, degree); }

GroupMap induced_on_cohomology(const CohomologyGroup& src, const CohomologyGroup& tgt, const IntMatrix& f) {
  if (src.copies != tgt.copies || src.degree != tgt.degree) throw std::invalid_argument("cohomology groups of different shape");
  IntMatrix big = IntMatrix::repeat_diagonal(f, src.copies);
  return make_group_map(src.group(), tgt.group(), induced_map(src.sq, tgt.sq, big));
}

CohomologyMap module_map_on_cohomology(const GammaModule& a, const GammaModule& b, const IntMatrix& f, int degree) {
  require_module_map(a, b, f);
  CohomologyMap r{tate_cohomology(a, degree), tate_cohomology(b, degree), {}};
  r.map = induced_on_cohomology(r.source, r.target, f);
  return r;
}

GroupMap restriction_map(const CohomologyGroup& src, const Subgroup& h, const CohomologyGroup& tgt) {
  const GammaModule& m = src.module;
  const FiniteGroup& g = m.gamma();
  const std::size_t n = m.num_generators();
  IntMatrix f;
  if (src.degree == -1) {
    f = IntMatrix(n, n);
    for (const auto& c : g.right_cosets(h.embed)) f = f + m.act(c[0]);
  } else if (src.degree == 0) {
    f = IntMatrix::identity(n);
  } else {
    const std::size_t k = static_cast<std::size_t>(src.degree);
    auto rg = standard_resolution(g);
    auto rh = standard_resolution(h.group);
    auto alpha = lift_chain_map(*rh, *rg, h.embed, k);
    f = cochain_pullback(alpha[k], rg->rank(k), m);
  }
  return make_group_map(src.group(), tgt.group(), induced_map(src.sq, tgt.sq, f));
}

CohomologyMap restriction(const GammaModule& m, const Subgroup& h, int degree) {
  CohomologyMap r{tate_cohomology(m, degree), tate_cohomology(restrict_module(m, h), degree), {}};
  r.map = restriction_map(r.source, h, r.target);
  return r;
}

CohomologyMap inflation(const GammaModule& m, const FiniteGroup& big, const std::vector<std::size_t>& pi, int degree) {
  if (degree < 1) throw std::invalid_argument("inflation is provided in degrees >= 1");
  GammaModule inflated = inflate_module(m, big, pi);
  CohomologyMap r{tate_cohomology(m, degree), tate_cohomology(inflated, degree), {}};
  const std::size_t k = static_cast<std::size_t>(degree);
  auto rq = standard_resolution(m.gamma());
  auto rb = standard_resolution(big);
  auto alpha = lift_chain_map(*rb, *rq, pi, k);
  IntMatrix f = cochain_pullback(alpha[k], rq->rank(k), m);
  r.map = make_group_map(r.source.group(), r.target.group(), induced_map(r.source.sq, r.target.sq, f));
  return r;
}

// ---------------------------------------------------------------------------

DirectSum direct_sum_of(const std::vector<FinAbGroup>& parts) {
  DirectSum s;
  s.parts = parts;
  std::vector<IntMatrix> blocks;
  std::size_t off = 0;
  for (const auto& p : parts) {
    s.offsets.push_back(off);
    off += p.num_factors();
    blocks.push_back(IntMatrix::diagonal(p.factors()));
  }
  s.group = FinAbGroup::cokernel(IntMatrix::block_diagonal(blocks));
  return s;
}

IntVector DirectSum::inject(std::size_t i, const IntVector& x) const {
  IntVector v(group.num_generators(), Int(0));
  for (std::size_t j = 0; j < x.size(); ++j) v[offsets[i] + j] = x[j];
  return group.canonical(v);
}

IntVector DirectSum::component(std::size_t i, const IntVector& x) const {
  IntVector v = group.lift(x);
  return parts[i].reduce(block(IntVector(v.begin() + static_cast<std::ptrdiff_t>(offsets[i]), v.end()), 0,
                               parts[i].num_factors()));
}

GroupMap map_into_sum(const FinAbGroup& source, const DirectSum& sum, const std::vector<GroupMap>& parts) {
  IntMatrix m(sum.group.num_factors(), source.num_factors());
  for (std::size_t j = 0; j < source.num_factors(); ++j) {
    IntVector v;
    for (const auto& p : parts) {
      IntVector c = apply_map(p, unit(source.num_factors(), j));
      v.insert(v.end(), c.begin(), c.end());
    }
    m.set_column(j, sum.group.canonical(v));
  }
  return make_group_map(source, sum.group, std::move(m));
}

GroupMap map_out_of_sum(const DirectSum& sum, const FinAbGroup& target, const std::vector<GroupMap>& parts) {
  IntMatrix m(target.num_factors(), sum.group.num_factors());
  for (std::size_t j = 0; j < sum.group.num_factors(); ++j) {
    IntVector acc(target.num_factors(), Int(0));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      IntVector c = apply_map(parts[i], sum.component(i, unit(sum.group.num_factors(), j)));
      for (std::size_t r = 0; r < acc.size(); ++r) acc[r] += c[r];
    }
    m.set_column(j, target.reduce(acc));
  }
  return make_group_map(sum.group, target, std::move(m));
}

ShapiroDecomposition shapiro_decompose(const GammaSet& x, const GammaModule& a, int degree,
                                       std::optional<std::vector<std::size_t>> points) {
  ShapiroDecomposition d;
  GammaModule ax = induced_module(x, a);
  d.whole = tate_cohomology(ax, degree);
  if (!points) {
    points.emplace();
    for (const auto& o : x.orbits()) points->push_back(o[0]);
  }
  d.points = *points;
  const std::size_t g = a.num_generators();
  std::vector<GroupMap> comps;
  std::vector<FinAbGroup> groups;
  for (std::size_t p : d.points) {
    Subgroup h = make_subgroup(a.gamma(), x.stabilizer(p));
    CohomologyGroup res_whole = tate_cohomology(restrict_module(ax, h), degree);
    GroupMap res = restriction_map(d.whole, h, res_whole);
    GammaModule ah = restrict_module(a, h);
    IntMatrix proj(g, g * x.size());
    proj.set_block(0, p * g, IntMatrix::identity(g));
    require_module_map(res_whole.module, ah, proj);
    CohomologyGroup part = tate_cohomology(ah, degree);
    comps.push_back(compose(induced_on_cohomology(res_whole, part, proj), res));
    groups.push_back(part.group());
    d.parts.push_back(std::move(part));
  }
  d.sum = direct_sum_of(groups);
  d.forward = map_into_sum(d.whole.group(), d.sum, comps);
  d.bijective = is_isomorphism(d.forward);
  if (d.bijective) d.backward = inverse_map(d.forward);
  return d;
}

// ---------------------------------------------------------------------------

void validate_ses(const ShortExactSequence& s) {
  require_module_map(s.a, s.b, s.i);
  require_module_map(s.b, s.c, s.p);
  GroupMap fi = make_presented_map(s.a.group(), s.b.group(), s.i);
  GroupMap fp = make_presented_map(s.b.group(), s.c.group(), s.p);
  if (!is_injective(fi)) throw std::invalid_argument("short exact sequence: first map not injective");
  if (!is_surjective(fp)) throw std::invalid_argument("short exact sequence: second map not surjective");
  if (!exact_at(fi, fp)) throw std::invalid_argument("short exact sequence: not exact in the middle");
}

GroupMap connecting_map(const ShortExactSequence& s, const CohomologyGroup& hc, const CohomologyGroup& ha_next) {
  const std::size_t ga = s.a.num_generators(), gb = s.b.num_generators(), gc = s.c.num_generators();
  LinearSolver lift_p(IntMatrix::hcat(s.p, s.c.relations()));
  LinearSolver pull_i(IntMatrix::hcat(s.i, s.b.relations()));
  std::vector<IntVector> images;
  for (std::size_t j = 0; j < hc.group().num_factors(); ++j) {
    IntVector z = hc.represent(unit(hc.group().num_factors(), j));
    IntVector y;
    for (std::size_t t = 0; t < hc.copies; ++t) {
      IntVector yb = solve_first(lift_p, block(z, t, gc), gb, "connecting map: cochain does not lift");
      y.insert(y.end(), yb.begin(), yb.end());
    }
    IntVector w;
    std::size_t out_copies = 1;
    if (hc.degree == -1) {
      w = norm_matrix(s.b) * y;
    } else {
      auto r = standard_resolution(s.b.gamma());
      const std::size_t k = static_cast<std::size_t>(hc.degree);
      w = cochain_differential(*r, s.b, k) * y;
      out_copies = r->rank(k + 1);
    }
    IntVector x;
    for (std::size_t t = 0; t < out_copies; ++t) {
      IntVector xb = solve_first(pull_i, block(w, t, gb), ga, "connecting map: boundary not in the submodule");
      x.insert(x.end(), xb.begin(), xb.end());
    }
    images.push_back(x);
  }
  return make_group_map(hc.group(), ha_next.group(), map_from_images(hc.sq, ha_next.sq, images));
}

bool LongExactReport::all_exact() const {
  for (const auto& n : nodes)
    if (n.checked && !n.exact) return false;
  return true;
}

LongExactReport long_exact_sequence(const ShortExactSequence& s, int lo, int hi) {
  validate_ses(s);
  LongExactReport r;
  auto name = [](const char* m, int k) { return std::string("H^") + std::to_string(k) + "(" + m + ")"; };
  CohomologyGroup ha = tate_cohomology(s.a, lo);
  for (int k = lo; k <= hi; ++k) {
    CohomologyGroup hb = tate_cohomology(s.b, k);
    CohomologyGroup hc = tate_cohomology(s.c, k);
    CohomologyGroup ha_next = tate_cohomology(s.a, k + 1);
    if (k == lo) r.nodes.push_back({name("A", k), ha.group()});
    r.nodes.push_back({name("B", k), hb.group()});
    r.nodes.push_back({name("C", k), hc.group()});
    r.nodes.push_back({name("A", k + 1), ha_next.group()});
    r.maps.push_back(induced_on_cohomology(ha, hb, s.i));
    r.maps.push_back(induced_on_cohomology(hb, hc, s.p));
    r.maps.push_back(connecting_map(s, hc, ha_next));
    ha = std::move(ha_next);
  }
  for (std::size_t n = 1; n + 1 < r.nodes.size(); ++n) {
    r.nodes[n].checked = true;
    r.nodes[n].exact = exact_at(r.maps[n - 1], r.maps[n]);
  }
  return r;
}

// ---------------------------------------------------------------------------

std::size_t tuple_count(const FiniteGroup& g, std::size_t k) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < k; ++i) n *= g.order();
  return n;
}

std::vector<std::size_t> decode_tuple(const FiniteGroup& g, std::size_t k, std::size_t code) {
  std::vector<std::size_t> t(k);
  for (std::size_t i = k; i-- > 0;) {
    t[i] = code % g.order();
    code /= g.order();
  }
  return t;
}

std::size_t encode_tuple(const FiniteGroup& g, const std::vector<std::size_t>& t) {
  std::size_t c = 0;
  for (std::size_t x : t) c = c * g.order() + x;
  return c;
}

namespace {

void add_scaled(IntVector& acc, const IntVector& v, int sign) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * v[i];
}

}  // namespace

CochainTable group_differential(const GammaModule& m, const CochainTable& f, std::size_t k) {
  const FiniteGroup& g = m.gamma();
  CochainTable out(tuple_count(g, k + 1), IntVector(m.num_generators(), Int(0)));
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto t = decode_tuple(g, k + 1, c);
    IntVector& acc = out[c];
    add_scaled(acc, m.act(t[0], f[encode_tuple(g, std::vector<std::size_t>(t.begin() + 1, t.end()))]), 1);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::size_t> s(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
      s.push_back(g.mul(t[i], t[i + 1]));
      s.insert(s.end(), t.begin() + static_cast<std::ptrdiff_t>(i + 2), t.end());
      add_scaled(acc, f[encode_tuple(g, s)], (i + 1) % 2 ? -1 : 1);
    }
    add_scaled(acc, f[encode_tuple(g, std::vector<std::size_t>(t.begin(), t.end() - 1))], (k + 1) % 2 ? -1 : 1);
  }
  return out;
}

CochainTable cech_differential(const GammaModule& m, const CochainTable& f, std::size_t n) {
  const FiniteGroup& g = m.gamma();
  CochainTable out(tuple_count(g, n + 1), IntVector(m.num_generators(), Int(0)));
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto t = decode_tuple(g, n + 1, c);
    for (std::size_t i = 0; i <= n; ++i) {
      std::vector<std::size_t> s;
      for (std::size_t a = 0; a <= n; ++a)
        if (a != i) s.push_back(t[a]);
      add_scaled(out[c], f[encode_tuple(g, s)], i % 2 ? -1 : 1);
    }
  }
  return out;
}

CochainTable to_cech(const GammaModule& m, const CochainTable& f, std::size_t n) {
  const FiniteGroup& g = m.gamma();
  CochainTable out(tuple_count(g, n));
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto t = decode_tuple(g, n, c);
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i + 1 < n; ++i) s.push_back(g.mul(g.inv(t[i]), t[i + 1]));
    out[c] = m.act(t[0], f[encode_tuple(g, s)]);
  }
  return out;
}

CochainTable to_group(const GammaModule& m, const CochainTable& f, std::size_t n) {
  const FiniteGroup& g = m.gamma();
  CochainTable out(tuple_count(g, n - 1));
  for (std::size_t c = 0; c < out.size(); ++c) {
    auto s = decode_tuple(g, n - 1, c);
    std::vector<std::size_t> t{g.identity()};
    for (std::size_t x : s) t.push_back(g.mul(t.back(), x));
    out[c] = f[encode_tuple(g, t)];
  }
  return out;
}

bool is_equivariant_cech(const GammaModule& m, const CochainTable& f, std::size_t n) {
  const FiniteGroup& g = m.gamma();
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t c = 0; c < f.size(); ++c) {
      auto t = decode_tuple(g, n, c);
      for (auto& y : t) y = g.mul(x, y);
      if (!m.equal(f[encode_tuple(g, t)], m.act(x, f[c]))) return false;
    }
  return true;
}

bool tables_equal(const GammaModule& m, const CochainTable& a, const CochainTable& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!m.equal(a[i], b[i])) return false;
  return true;
}

CochainTable inhomogeneous_cocycle(const GammaModule& m, std::size_t k, const IntVector& small_cochain) {
  const std::size_t g = m.num_generators();
  if (k == 0) return {small_cochain};
  BarResolution bar(m.gamma(), k);
  auto small = standard_resolution(m.gamma());
  std::vector<std::size_t> id(m.gamma().order());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  auto alpha = lift_chain_map(bar, *small, id, k);
  IntVector v = cochain_pullback(alpha[k], small->rank(k), m) * small_cochain;
  CochainTable out;
  for (std::size_t t = 0; t < bar.rank(k); ++t) out.push_back(block(v, t, g));
  return out;
}

}  // namespace rif

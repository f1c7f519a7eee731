#include "rif/rigid.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace rif {

namespace {

IntMatrix scalar(std::size_t k, const Int& s) { return IntMatrix::identity(k).scaled(s); }

bool same_map(const GroupMap& f, const GroupMap& g) {
  if (f.matrix.cols() != g.matrix.cols() || f.matrix.rows() != g.matrix.rows()) return false;
  for (std::size_t j = 0; j < f.matrix.cols(); ++j) {
    IntVector d = (f.matrix - g.matrix).column(j);
    if (!is_zero(f.target.reduce(d))) return false;
  }
  return true;
}

// Coordinates y on the columns of a submodule with inclusion * y == x modulo the ambient relations.
struct SubmoduleCoordinates {
  LinearSolver solver;  // on [inclusion | relations]
  std::size_t k = 0;

  SubmoduleCoordinates(const IntMatrix& inclusion, const IntMatrix& relations)
      : solver(IntMatrix::hcat(inclusion, relations)), k(inclusion.cols()) {}
  SubmoduleCoordinates(const IntMatrix& inclusion, const Int& n)
      : SubmoduleCoordinates(inclusion, scalar(inclusion.rows(), n)) {}

  std::optional<IntVector> operator()(const IntVector& x) const {
    auto s = solver.solve(x);
    if (!s) return std::nullopt;
    return IntVector(s->begin(), s->begin() + static_cast<std::ptrdiff_t>(k));
  }
};

// Submodule coordinates of each column; throws if a column leaves the submodule.
IntMatrix submodule_columns(const Submodule& sub, const IntMatrix& relations, const IntMatrix& x) {
  SubmoduleCoordinates into(sub.inclusion, relations);
  IntMatrix out(sub.inclusion.cols(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto y = into(x.column(j));
    if (!y) throw std::logic_error("image leaves the submodule");
    out.set_column(j, *y);
  }
  return out;
}
IntMatrix submodule_columns(const Submodule& sub, const Int& n, const IntMatrix& x) {
  return submodule_columns(sub, scalar(sub.inclusion.rows(), n), x);
}

// Components h_{w, i} = x / (n / a_i) of a map's ambient values at sigma = e.
IntVector psi_components(const IntMatrix& h_ambient, const Level& level, const IntVector& factors) {
  const Int& n = level.modulus();
  const std::size_t s = level.places().size(), k = factors.size();
  const std::size_t e = level.group().identity();
  IntVector out(s * k);
  for (std::size_t w = 0; w < s; ++w)
    for (std::size_t i = 0; i < k; ++i) {
      Int x = mod(h_ambient(e * s + w, i), n);
      Int q = n / factors[i];
      if (x % q != 0) throw std::logic_error("map value is not killed by the order of its argument");
      out[w * k + i] = x / q;
    }
  return out;
}

std::vector<std::size_t> non_dotted(const PlaceSystem& p) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < p.places.size(); ++w)
    if (!p.in_section(w)) out.push_back(w);
  return out;
}

// Rows picking the k coordinates of block w, for each listed w.
IntMatrix block_selector(const std::vector<std::size_t>& blocks, std::size_t k, std::size_t dim) {
  IntMatrix c(blocks.size() * k, dim);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t i = 0; i < k; ++i) c(b * k + i, blocks[b] * k + i) = 1;
  return c;
}

IntMatrix block_sum(std::size_t blocks, std::size_t k) {
  IntMatrix c(k, blocks * k);
  for (std::size_t w = 0; w < blocks; ++w)
    for (std::size_t i = 0; i < k; ++i) c(i, w * k + i) = 1;
  return c;
}

// (A_s - 1) B over a generating set s.
IntMatrix augmentation_image(const GammaModule& ybar, const IntMatrix& basis) {
  const FiniteGroup& g = ybar.gamma();
  const std::size_t r = ybar.num_generators();
  IntMatrix out(r, 0);
  for (std::size_t s : g.generating_set())
    out = IntMatrix::hcat(out, (ybar.act(s) - IntMatrix::identity(r)) * basis);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Level make_level(PlaceSystem system, bool allow_violations) {
  system.validate();
  if (system.modulus <= 0) throw std::invalid_argument("level modulus must be positive");
  if (!allow_violations) {
    ConditionReport r = check_place_conditions(system);
    if (!r.stabilizers_covered) throw std::invalid_argument("stabilizer coverage fails for the places of " + system.label_e);
    if (!r.dotted_fixed)
      throw std::invalid_argument("dotted fixed points fail: " + std::to_string(r.dotted_fixed_violators.size()) +
                                  " elements fix no dotted place");
  }
  return Level{std::move(system), allow_violations};
}

LevelModules level_modules(const Level& level) {
  const auto& sec = level.system.section;
  return {gamma_times_places(level.places(), level.modulus()),
          double_augmentation_kernel(level.places(), level.modulus()),
          double_augmentation_kernel(level.places(), level.modulus(), sec)};
}

LevelSequence level_sequence(const Level& level) {
  const FiniteGroup& g = level.group();
  const GammaSet& x = level.places();
  const Int& n = level.modulus();
  const std::size_t s = x.size(), o = g.order();
  const auto orbits = x.orbits();
  const std::size_t q = orbits.size();
  std::vector<std::size_t> orbit_of(s);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t w : orbits[j]) orbit_of[w] = j;

  LevelModules lm = level_modules(level);
  GammaModule mid_ambient = gamma_times_places(GammaSet::trivial(g, q), n);
  IntMatrix per_sigma(o, o * q);
  for (std::size_t sg = 0; sg < o; ++sg)
    for (std::size_t j = 0; j < q; ++j) per_sigma(sg, sg * q + j) = 1;
  Submodule mid = kernel_submodule(mid_ambient, per_sigma, scalar(o, n));
  Submodule right = augmentation_kernel(x, GammaModule::trivial_cyclic(g, n));

  // (sigma, w) -> (sigma, orbit of w) on dotted pairs.
  IntMatrix j_amb(o * q, o * s);
  for (std::size_t sg = 0; sg < o; ++sg)
    for (std::size_t w = 0; w < s; ++w)
      if (level.system.in_section(x.act(g.inv(sg), w))) j_amb(sg * q + orbit_of[w], sg * s + w) = 1;
  // (sigma, j) -> sigma applied to the dotted place of orbit j.
  IntMatrix p_amb(s, o * q);
  for (std::size_t sg = 0; sg < o; ++sg)
    for (std::size_t j = 0; j < q; ++j) p_amb(x.act(sg, level.system.section_point(orbits[j][0])), sg * q + j) = 1;

  LevelSequence out;
  try {
    IntMatrix i = submodule_columns(mid, n, j_amb * lm.dotted.inclusion);
    IntMatrix p = submodule_columns(right, n, p_amb * mid.inclusion);
    out.ses = ShortExactSequence{lm.dotted.module, mid.module, right.module, i, p};
    validate_ses(out.ses);
    out.exact = true;
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------

PsiReport psi_map(const Level& level, const GammaModule& a) {
  const FiniteGroup& g = level.group();
  const GammaSet& x = level.places();
  const Int& n = level.modulus();
  const std::size_t s = x.size();
  if (!a.is_finite()) throw std::invalid_argument("A must be finite");
  if (!(a.gamma().table() == g.table())) throw std::invalid_argument("A is over a different group");
  const IntVector fa = a.group().factors();
  const std::size_t k = fa.size();
  for (const Int& f : fa)
    if (n % f != 0) throw std::invalid_argument("the exponent of A does not divide n");

  LevelModules lm = level_modules(level);
  CanonicalModule ca = canonical_module(a);
  CanonicalModule cm = canonical_module(lm.full.module);
  const FinAbGroup ga = FinAbGroup::standard(fa);
  const FinAbGroup gm = FinAbGroup::standard(lm.full.module.group().factors());

  PsiReport r;
  r.hom = hom_group(ga, gm);
  const FinAbGroup& hg = r.hom.group;
  const std::size_t kh = hg.num_factors();
  const IntMatrix hom_rel = FinAbGroup::standard(hg.factors()).relations();
  const IntMatrix to_ambient = lm.full.inclusion * cm.from;  // canonical M -> ambient

  // Fixed points: kernel of H -> (M_s H - H A_s) over a generating set.
  const auto gens = g.generating_set();
  IntVector sum_factors;
  for (std::size_t t = 0; t < gens.size(); ++t) sum_factors.insert(sum_factors.end(), hg.factors().begin(), hg.factors().end());
  IntMatrix defect(sum_factors.size(), kh);
  for (std::size_t j = 0; j < kh; ++j) {
    IntMatrix h = r.hom.to_matrix(unit(kh, j));
    IntVector col;
    for (std::size_t t : gens) {
      IntVector c = r.hom.from_matrix(cm.module.act(t) * h - h * ca.module.act(t));
      col.insert(col.end(), c.begin(), c.end());
    }
    defect.set_column(j, col);
  }
  IntMatrix fixed_gens = kh ? kernel_generators(make_group_map(hg, FinAbGroup::standard(sum_factors), defect))
                            : IntMatrix(0, 0);
  r.fixed = Subquotient(hom_rel, fixed_gens, IntMatrix(kh, 0));

  auto ambient_of = [&](const IntVector& hom_elem) { return to_ambient * r.hom.to_matrix(hom_elem); };

  // Dotted part: ambient values vanish at (sigma, w) with sigma^-1 w off the section.
  std::vector<std::size_t> bad;
  for (std::size_t sg = 0; sg < g.order(); ++sg)
    for (std::size_t w = 0; w < s; ++w)
      if (!level.system.in_section(x.act(g.inv(sg), w))) bad.push_back(sg * s + w);
  {
    const IntMatrix lifts = r.fixed.generator_lifts();
    const std::size_t kf = r.fixed.group().num_factors();
    IntMatrix vals(bad.size() * k, kf);
    for (std::size_t j = 0; j < kf; ++j) {
      IntMatrix h = ambient_of(lifts.column(j));
      for (std::size_t b = 0; b < bad.size(); ++b)
        for (std::size_t i = 0; i < k; ++i) vals(b * k + i, j) = mod(h(bad[b], i), n);
    }
    IntMatrix dotted_gens(kh, 0);
    if (kf) {
      IntMatrix kg = vals.rows() ? kernel_generators(make_group_map(
                                       r.fixed.group(), FinAbGroup::standard(IntVector(vals.rows(), n)), vals))
                                 : IntMatrix::identity(kf);
      IntMatrix lifted(kh, kg.cols());
      for (std::size_t c = 0; c < kg.cols(); ++c) lifted.set_column(c, r.fixed.represent(kg.column(c)));
      dotted_gens = lifted;
    }
    r.fixed_dotted = Subquotient(hom_rel, dotted_gens, IntMatrix(kh, 0));
  }

  // Cocycles: norm kernel inside the augmentation kernel of A^vee[S].
  GammaModule dual = dual_module(a);
  r.dual_places = induced_module(x, dual);
  const IntMatrix& rel_dp = r.dual_places.relations();
  const std::size_t dim = s * k;
  IntMatrix c1 = IntMatrix::vcat(norm_matrix(r.dual_places), block_sum(s, k));
  IntMatrix t1 = IntMatrix::block_diagonal({rel_dp, dual.relations()});
  r.cocycles = Subquotient(rel_dp, solution_lattice(c1, t1, dim), IntMatrix(dim, 0));
  const auto off = non_dotted(level.system);
  IntMatrix c2 = IntMatrix::vcat(c1, block_selector(off, k, dim));
  std::vector<IntMatrix> t2 = {rel_dp, dual.relations()};
  for (std::size_t b = 0; b < off.size(); ++b) t2.push_back(dual.relations());
  r.cocycles_dotted = Subquotient(rel_dp, solution_lattice(c2, IntMatrix::block_diagonal(t2), dim), IntMatrix(dim, 0));

  auto images = [&](const Subquotient& src) {
    std::vector<IntVector> out;
    const IntMatrix lifts = src.generator_lifts();
    for (std::size_t j = 0; j < lifts.cols(); ++j) out.push_back(psi_components(ambient_of(lifts.column(j)), level, fa));
    return out;
  };
  r.psi = make_group_map(r.fixed.group(), r.cocycles.group(), map_from_images(r.fixed, r.cocycles, images(r.fixed)));
  r.psi_dotted = make_group_map(r.fixed_dotted.group(), r.cocycles_dotted.group(),
                                map_from_images(r.fixed_dotted, r.cocycles_dotted, images(r.fixed_dotted)));
  r.bijective = is_isomorphism(r.psi);
  r.dotted_onto = is_surjective(r.psi_dotted);

  // Inverse: H(a_i)[(sigma, w)] = sum_j B(sigma^-1)_{j,i} h_{sigma^-1 w, j} (n / a_j).
  try {
    SubmoduleCoordinates into_m(lm.full.inclusion, n);
    const IntMatrix lifts = r.cocycles.generator_lifts();
    const std::size_t kc = r.cocycles.group().num_factors();
    IntMatrix inv(r.fixed.group().num_factors(), kc);
    for (std::size_t c = 0; c < kc; ++c) {
      const IntVector h = lifts.column(c);
      IntMatrix amb(g.order() * s, k);
      for (std::size_t sg = 0; sg < g.order(); ++sg) {
        const std::size_t si = g.inv(sg);
        const IntMatrix& b = ca.module.act(si);
        for (std::size_t w = 0; w < s; ++w) {
          const std::size_t w0 = x.act(si, w);
          for (std::size_t i = 0; i < k; ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < k; ++j) acc += b(j, i) * h[w0 * k + j] * (n / fa[j]);
            amb(sg * s + w, i) = mod(acc, n);
          }
        }
      }
      IntMatrix hm(gm.num_factors(), k);
      for (std::size_t i = 0; i < k; ++i) {
        auto y = into_m(amb.column(i));
        if (!y) throw std::logic_error("inverse leaves M");
        hm.set_column(i, gm.reduce(cm.to * *y));
      }
      inv.set_column(c, r.fixed.classify(r.hom.from_matrix(hm)));
    }
    r.inverse = make_group_map(r.cocycles.group(), r.fixed.group(), inv);
    r.inverse_verified = same_map(compose(r.inverse, r.psi), identity_map(r.fixed.group())) &&
                         same_map(compose(r.psi, r.inverse), identity_map(r.cocycles.group()));
  } catch (const std::exception&) {
    r.inverse_verified = false;
  }

  // Classes in Tate H^-1 of A^vee[S]_0.
  Submodule aug = augmentation_kernel(x, dual);
  r.tate = tate_cohomology(aug.module, -1);
  const IntMatrix dl = submodule_columns(aug, rel_dp, r.cocycles_dotted.generator_lifts());
  IntMatrix tt(r.tate.group().num_factors(), dl.cols());
  for (std::size_t j = 0; j < dl.cols(); ++j) tt.set_column(j, r.tate.classify(dl.column(j)));
  r.to_tate = make_group_map(r.cocycles_dotted.group(), r.tate.group(), tt);
  r.tate_surjective = is_surjective(r.to_tate);
  return r;
}

bool psi_compatible(const Level& nl, const Level& ml, const GammaModule& a) {
  if (!(nl.places().action() == ml.places().action()) || nl.system.section != ml.system.section)
    throw std::invalid_argument("levels differ in their places");
  const Int& n = nl.modulus();
  const Int& m = ml.modulus();
  if (m % n != 0) throw std::invalid_argument("n must divide m");
  PsiReport rn = psi_map(nl, a), rm = psi_map(ml, a);
  LevelModules ln = level_modules(nl), lmm = level_modules(ml);
  CanonicalModule cn = canonical_module(ln.full.module), cmm = canonical_module(lmm.full.module);
  const FinAbGroup gmm = FinAbGroup::standard(lmm.full.module.group().factors());
  SubmoduleCoordinates into_m(lmm.full.inclusion, m);
  const IntMatrix lifts = rn.fixed.generator_lifts();
  for (std::size_t j = 0; j < lifts.cols(); ++j) {
    IntMatrix amb = (ln.full.inclusion * cn.from * rn.hom.to_matrix(lifts.column(j))).scaled(m / n);
    IntMatrix hm(gmm.num_factors(), amb.cols());
    for (std::size_t i = 0; i < amb.cols(); ++i) {
      auto y = into_m(amb.column(i));
      if (!y) return false;
      hm.set_column(i, gmm.reduce(cmm.to * *y));
    }
    IntVector elem = rm.hom.from_matrix(hm);
    if (!rm.fixed.contains(elem)) return false;
    IntVector via_m = rm.cocycles.represent(apply_map(rm.psi, rm.fixed.classify(elem)));
    IntVector via_n = rn.cocycles.represent(apply_map(rn.psi, unit(lifts.cols(), j)));
    if (!rn.dual_places.equal(via_m, via_n)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

void validate_level_map(const LevelMap& f) {
  const FiniteGroup& gk = f.target.group();
  const FiniteGroup& ge = f.source.group();
  const GammaSet& xk = f.target.places();
  const GammaSet& xe = f.source.places();
  if (f.pi.size() != gk.order() || !is_homomorphism(gk, ge, f.pi))
    throw std::invalid_argument("pi is not a homomorphism Gamma_K -> Gamma_E");
  std::vector<bool> hit(ge.order(), false);
  for (std::size_t v : f.pi) hit[v] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw std::invalid_argument("pi is not onto");
  if (f.target.modulus() % f.source.modulus() != 0) throw std::invalid_argument("n does not divide m");
  if (f.restrict.size() != xk.size()) throw std::invalid_argument("restriction has the wrong size");
  std::vector<bool> covered(xe.size(), false);
  for (std::size_t u = 0; u < xk.size(); ++u) {
    for (std::size_t gm = 0; gm < gk.order(); ++gm) {
      const auto& img = f.restrict[xk.act(gm, u)];
      if (img.has_value() != f.restrict[u].has_value())
        throw std::invalid_argument("S_K is not Gamma_K-stable");
      if (img && *img != xe.act(f.pi[gm], *f.restrict[u]))
        throw std::invalid_argument("restriction is not equivariant");
    }
    if (f.restrict[u]) {
      if (*f.restrict[u] >= xe.size()) throw std::invalid_argument("restriction out of range");
      covered[*f.restrict[u]] = true;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw std::invalid_argument("restriction is not onto S_E");
  if (f.section.size() != xe.size()) throw std::invalid_argument("section has the wrong size");
  for (std::size_t w = 0; w < xe.size(); ++w) {
    const std::size_t u = f.section[w];
    if (u >= xk.size() || !f.restrict[u] || *f.restrict[u] != w)
      throw std::invalid_argument("section does not lie over the identity");
    if (f.source.system.in_section(w) && !f.target.system.in_section(u))
      throw std::invalid_argument("section sends a dotted place off the dotted set");
  }
}

LevelMap identity_level_map(const Level& level) {
  LevelMap f{level, level, {}, {}, {}};
  for (std::size_t g = 0; g < level.group().order(); ++g) f.pi.push_back(g);
  for (std::size_t w = 0; w < level.places().size(); ++w) {
    f.restrict.emplace_back(w);
    f.section.push_back(w);
  }
  return f;
}

LevelMap compose(const LevelMap& g, const LevelMap& f) {
  LevelMap h{f.source, g.target, {}, {}, {}};
  for (std::size_t x : g.pi) h.pi.push_back(f.pi[x]);
  for (const auto& u : g.restrict)
    h.restrict.push_back(u ? f.restrict[*u] : std::nullopt);
  for (std::size_t w : f.section) h.section.push_back(g.section[w]);
  return h;
}

IntMatrix transition_matrix(const LevelMap& f) {
  const FiniteGroup& gk = f.target.group();
  const GammaSet& xk = f.target.places();
  const std::size_t sk = xk.size(), se = f.source.places().size();
  const Int scale = f.target.modulus() / f.source.modulus();
  IntMatrix t(gk.order() * sk, f.source.group().order() * se);
  for (std::size_t g = 0; g < gk.order(); ++g)
    for (std::size_t u = 0; u < sk; ++u)
      if (f.restrict[u] && f.target.system.in_section(xk.act(gk.inv(g), u)))
        t(g * sk + u, f.pi[g] * se + *f.restrict[u]) = scale;
  return t;
}

TransitionReport level_transition(const LevelMap& f) {
  validate_level_map(f);
  LevelModules ls = level_modules(f.source), lt = level_modules(f.target);
  IntMatrix y = submodule_columns(lt.dotted, f.target.modulus(), transition_matrix(f) * ls.dotted.inclusion);
  TransitionReport r;
  r.map = make_presented_map(ls.dotted.module.group(), lt.dotted.module.group(), y);
  GammaModule inflated = inflate_module(ls.dotted.module, f.target.group(), f.pi);
  r.equivariant = is_module_map(inflated, lt.dotted.module, y);
  return r;
}

CompanionTransition companion_transition(const LevelMap& f) {
  validate_level_map(f);
  const FiniteGroup& gk = f.target.group();
  const GammaSet& xk = f.target.places();
  const GammaSet& xe = f.source.places();
  const Int& n = f.source.modulus();
  const Int& m = f.target.modulus();
  const Int scale = m / n;
  CompanionTransition r;
  r.ambient = IntMatrix(xk.size(), xe.size());
  r.coefficients_vanish = true;
  const std::size_t e = f.source.group().identity();
  for (std::size_t u = 0; u < xk.size(); ++u) {
    if (!f.restrict[u]) continue;
    std::size_t count = 0;
    for (std::size_t g : xk.stabilizer(u))
      if (f.pi[g] == e) ++count;
    r.ambient(u, *f.restrict[u]) = scale * count;
    if (mod(scale * count, m) != 0) r.coefficients_vanish = false;
  }
  Submodule src = augmentation_kernel(xe, GammaModule::trivial_cyclic(f.source.group(), n));
  Submodule tgt = augmentation_kernel(xk, GammaModule::trivial_cyclic(gk, m));
  r.map = make_presented_map(src.module.group(), tgt.module.group(),
                             submodule_columns(tgt, m, r.ambient * src.inclusion));
  r.vanishes = is_zero_map(r.map);
  return r;
}

LevelMap make_tower(const FiniteGroup& big, const std::vector<std::size_t>& kernel,
                    const std::vector<TowerPlace>& places, const Int& n, const Int& m, bool allow_violations) {
  if (places.empty()) throw std::invalid_argument("a tower needs at least one place");
  QuotientGroup q = make_quotient(big, kernel);
  const FiniteGroup& ge = q.group;
  std::optional<GammaSet> upper, lower;
  std::vector<std::size_t> up_off, low_off;
  std::vector<GammaSet> up_blocks, low_blocks;
  for (const auto& p : places) {
    if (!big.is_subgroup(p.decomposition)) throw std::invalid_argument("decomposition group is not a subgroup");
    GammaSet ub = GammaSet::coset_space(big, p.decomposition);
    up_off.push_back(upper ? upper->size() : 0);
    upper = upper ? GammaSet::disjoint_union(*upper, ub) : ub;
    up_blocks.push_back(ub);
    std::set<std::size_t> img;
    for (std::size_t d : p.decomposition) img.insert(q.proj[d]);
    GammaSet lb = GammaSet::coset_space(ge, std::vector<std::size_t>(img.begin(), img.end()));
    low_blocks.push_back(lb);
    if (p.in_lower) {
      low_off.push_back(lower ? lower->size() : 0);
      lower = lower ? GammaSet::disjoint_union(*lower, lb) : lb;
    } else {
      low_off.push_back(SIZE_MAX);
    }
  }
  if (!lower) throw std::invalid_argument("no place lies in the lower level");

  std::vector<std::optional<std::size_t>> restrict(upper->size());
  std::vector<std::optional<std::size_t>> section(lower->size());
  std::vector<std::size_t> order = {big.identity()};
  for (std::size_t g = 0; g < big.order(); ++g)
    if (g != big.identity()) order.push_back(g);
  for (std::size_t b = 0; b < places.size(); ++b) {
    if (low_off[b] == SIZE_MAX) continue;
    for (std::size_t g : order) {
      const std::size_t u = up_off[b] + up_blocks[b].act(g, 0);
      const std::size_t w = low_off[b] + low_blocks[b].act(q.proj[g], 0);
      restrict[u] = w;
      if (!section[w]) section[w] = u;
    }
  }

  PlaceSystem us, ls;
  us.places = *upper;
  us.section = up_off;
  us.modulus = m;
  us.label_e = "K";
  ls.places = *lower;
  for (std::size_t o : low_off)
    if (o != SIZE_MAX) ls.section.push_back(o);
  ls.modulus = n;
  LevelMap f{make_level(ls, allow_violations), make_level(us, allow_violations), q.proj, restrict, {}};
  for (const auto& s : section) f.section.push_back(*s);
  validate_level_map(f);
  return f;
}

LevelMap inflate_level(const Level& level, const FiniteGroup& big, const std::vector<std::size_t>& pi, const Int& m) {
  if (pi.size() != big.order() || !is_homomorphism(big, level.group(), pi))
    throw std::invalid_argument("pi is not a homomorphism onto the level group");
  std::vector<Perm> act;
  for (std::size_t g = 0; g < big.order(); ++g) act.push_back(level.places().action()[pi[g]]);
  PlaceSystem up = level.system;
  up.places = GammaSet(big, std::move(act));
  up.ambient.reset();
  up.modulus = m;
  LevelMap f = identity_level_map(level);
  f.target = make_level(std::move(up), level.allow_violations);
  f.pi = pi;
  validate_level_map(f);
  return f;
}

// ---------------------------------------------------------------------------

Localization localize_level(const Level& level, const DecompositionData& d) {
  if (!level.system.in_section(d.place)) throw std::invalid_argument("place is outside the dotted section");
  const FiniteGroup& g = level.group();
  const std::size_t s = level.places().size();
  LevelModules lm = level_modules(level);
  Localization r;
  r.decomposition = make_subgroup(g, d.stabilizer);
  const FiniteGroup& gv = r.decomposition.group;
  r.target = augmentation_kernel(GammaSet::regular(gv), GammaModule::trivial_cyclic(gv, level.modulus()));
  r.ambient = IntMatrix(gv.order(), g.order() * s);
  for (std::size_t i = 0; i < gv.order(); ++i) r.ambient(i, r.decomposition.embed[i] * s + d.place) = 1;
  IntMatrix y = submodule_columns(r.target, level.modulus(), r.ambient * lm.dotted.inclusion);
  r.map = make_presented_map(lm.dotted.module.group(), r.target.module.group(), y);
  r.equivariant = is_module_map(restrict_module(lm.dotted.module, r.decomposition), r.target.module, y);
  return r;
}

bool localization_square_commutes(const LevelMap& f, std::size_t v) {
  validate_level_map(f);
  if (!f.source.system.in_section(v)) throw std::invalid_argument("place is outside the dotted section");
  const std::size_t u = f.section[v];
  const FiniteGroup& gk = f.target.group();
  const std::size_t se = f.source.places().size(), sk = f.target.places().size();
  const Int& m = f.target.modulus();
  const Int scale = m / f.source.modulus();
  const auto stab_v = f.source.places().stabilizer(v);
  const auto stab_u = f.target.places().stabilizer(u);
  for (std::size_t g : stab_u)
    if (!std::binary_search(stab_v.begin(), stab_v.end(), f.pi[g])) return false;
  LevelModules ls = level_modules(f.source);
  const IntMatrix t = transition_matrix(f);
  for (std::size_t j = 0; j < ls.dotted.inclusion.cols(); ++j) {
    const IntVector x = ls.dotted.inclusion.column(j);
    const IntVector tx = t * x;
    for (std::size_t g : stab_u) {
      Int up = tx[g * sk + u];
      Int down = scale * x[f.pi[g] * se + v];
      if (mod(up - down, m) != 0) return false;
    }
  }
  (void)gk;
  return true;
}

// ---------------------------------------------------------------------------

void validate_pair(const IsogenyPair& p) {
  const std::size_t r = p.ybar.num_generators();
  if (p.ybar.relations().cols() != 0 && !p.ybar.relations().is_zero())
    throw std::invalid_argument("Ybar must be a lattice");
  if (p.y_basis.rows() != r || p.y_basis.cols() != r) throw std::invalid_argument("Y basis must be square of rank r");
  if (smith_normal_form(p.y_basis).rank != r) throw std::invalid_argument("Y has infinite index in Ybar");
  LinearSolver sol(p.y_basis);
  for (const auto& a : p.ybar.action()) {
    IntMatrix img = a * p.y_basis;
    for (std::size_t j = 0; j < r; ++j)
      if (!sol.solvable(img.column(j))) throw std::invalid_argument("Y is not Gamma-stable");
  }
}

GammaModule pair_quotient(const IsogenyPair& p) {
  validate_pair(p);
  return GammaModule(p.ybar.gamma(), p.y_basis, p.ybar.action());
}

IsogenyPair inflate_pair(const IsogenyPair& p, const FiniteGroup& big, const std::vector<std::size_t>& pi) {
  return {inflate_module(p.ybar, big, pi), p.y_basis};
}

IntVector YbarGroup::dotted_representative(const IntVector& cls) const {
  IntVector x = group.represent(cls);
  auto z = dotted_solver.solve(x);
  if (!z) throw std::logic_error("class has no representative on the section");
  IntVector c(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(dotted_support.cols()));
  return dotted_support * c;
}

YbarGroup ybar_group(const IsogenyPair& p, const Level& level) {
  validate_pair(p);
  if (!(p.ybar.gamma().table() == level.group().table())) throw std::invalid_argument("pair is over a different group");
  const GammaSet& x = level.places();
  const std::size_t r = p.ybar.num_generators(), s = x.size(), dim = r * s;
  const IntMatrix& b = p.y_basis;
  GammaModule big = induced_module(x, p.ybar);

  YbarGroup out;
  out.rank = r;
  // Y[S]_0 as differences against block 0.
  IntMatrix y0(dim, 0);
  for (std::size_t w = 1; w < s; ++w)
    for (std::size_t i = 0; i < r; ++i) {
      IntVector v(dim, Int(0));
      for (std::size_t t = 0; t < r; ++t) {
        v[w * r + t] = b(t, i);
        v[t] = -b(t, i);
      }
      y0 = IntMatrix::hcat(y0, IntMatrix::column_vector(v));
    }
  out.iy = IntMatrix(dim, 0);
  for (std::size_t g : level.group().generating_set())
    out.iy = IntMatrix::hcat(out.iy, (big.act(g) - IntMatrix::identity(dim)) * y0);

  const auto off = non_dotted(level.system);
  const IntMatrix sum = block_sum(s, r);
  std::vector<IntMatrix> tw = {IntMatrix(r, 0)};
  for (std::size_t t = 0; t < off.size(); ++t) tw.push_back(b);
  IntMatrix cw = IntMatrix::vcat(sum, block_selector(off, r, dim));
  IntMatrix tw_m = IntMatrix::block_diagonal(tw);
  IntMatrix whole_gens = solution_lattice(cw, tw_m, dim);
  IntMatrix cn = IntMatrix::vcat(cw, norm_matrix(big));
  IntMatrix num = solution_lattice(cn, IntMatrix::block_diagonal({tw_m, IntMatrix(dim, 0)}), dim);
  std::vector<std::size_t> all(s);
  for (std::size_t w = 0; w < s; ++w) all[w] = w;
  std::vector<IntMatrix> ty = {IntMatrix(r, 0)};
  for (std::size_t t = 0; t < s; ++t) ty.push_back(b);
  ty.push_back(IntMatrix(dim, 0));
  IntMatrix yn = solution_lattice(IntMatrix::vcat(IntMatrix::vcat(sum, block_selector(all, r, dim)), norm_matrix(big)),
                                  IntMatrix::block_diagonal(ty), dim);

  const IntMatrix empty(dim, 0);
  out.group = Subquotient(empty, num, out.iy);
  out.whole = Subquotient(empty, whole_gens, out.iy);
  out.y_part = Subquotient(empty, yn, out.iy);

  std::vector<std::size_t> dotted = level.system.section;
  std::sort(dotted.begin(), dotted.end());
  out.dotted_support = IntMatrix(dim, 0);
  for (std::size_t t = 1; t < dotted.size(); ++t)
    for (std::size_t i = 0; i < r; ++i) {
      IntVector v(dim, Int(0));
      v[dotted[t] * r + i] = 1;
      v[dotted[0] * r + i] = -1;
      out.dotted_support = IntMatrix::hcat(out.dotted_support, IntMatrix::column_vector(v));
    }
  out.dotted_solver = LinearSolver(IntMatrix::hcat(out.dotted_support, out.iy));

  // Certificate: group lands in the torsion of whole and has the same order.
  if (out.group.group().is_finite()) {
    const FinAbGroup& wg = out.whole.group();
    bool torsion = true;
    for (std::size_t j = 0; j < num.cols() && torsion; ++j) {
      IntVector c = out.whole.classify(num.column(j));
      for (std::size_t i = 0; i < c.size(); ++i)
        if (wg.factors()[i] == 0 && c[i] != 0) torsion = false;
    }
    out.torsion_certified = torsion && out.whole.torsion().group().order() == out.group.group().order();
  }
  out.dotted_certified = true;
  for (std::size_t j = 0; j < num.cols(); ++j)
    if (!out.dotted_solver.solvable(num.column(j))) out.dotted_certified = false;
  return out;
}

bool ybar_sequence_exact(const IsogenyPair& p, const Level& level, const YbarGroup& g) {
  const std::size_t dim = g.rank * level.places().size();
  Subquotient tgt = Subquotient::whole(IntMatrix::repeat_diagonal(p.y_basis, level.places().size()));
  const IntMatrix id = IntMatrix::identity(dim);
  GroupMap incl = make_group_map(g.y_part.group(), g.group.group(), induced_map(g.y_part, g.group, id));
  GroupMap proj = make_group_map(g.group.group(), tgt.group(), induced_map(g.group, tgt, id));
  return is_injective(incl) && exact_at(incl, proj);
}

// ---------------------------------------------------------------------------

IntMatrix shriek_matrix(const LevelMap& f, std::size_t rank, const std::vector<std::size_t>& section) {
  const std::size_t se = f.source.places().size(), sk = f.target.places().size();
  IntMatrix m(rank * sk, rank * se);
  for (std::size_t w = 0; w < se; ++w)
    for (std::size_t i = 0; i < rank; ++i) m(section[w] * rank + i, w * rank + i) = 1;
  return m;
}

std::vector<std::vector<std::size_t>> admissible_sections(const LevelMap& f) {
  const std::size_t se = f.source.places().size();
  std::vector<std::vector<std::size_t>> choices(se);
  for (std::size_t u = 0; u < f.restrict.size(); ++u) {
    if (!f.restrict[u]) continue;
    const std::size_t w = *f.restrict[u];
    if (f.source.system.in_section(w) && !f.target.system.in_section(u)) continue;
    choices[w].push_back(u);
  }
  std::vector<std::vector<std::size_t>> out = {{}};
  for (std::size_t w = 0; w < se; ++w) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& partial : out)
      for (std::size_t u : choices[w]) {
        auto v = partial;
        v.push_back(u);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

ShriekReport shriek_map(const IsogenyPair& p, const LevelMap& f, std::size_t audit_limit) {
  validate_level_map(f);
  const std::size_t r = p.ybar.num_generators();
  ShriekReport out;
  out.lower = ybar_group(p, f.source);
  out.upper = ybar_group(inflate_pair(p, f.target.group(), f.pi), f.target);
  auto build = [&](const std::vector<std::size_t>& sec) {
    return make_group_map(out.lower.group.group(), out.upper.group.group(),
                          induced_map(out.lower.group, out.upper.group, shriek_matrix(f, r, sec)));
  };
  out.map = build(f.section);
  out.independent = true;
  auto sections = admissible_sections(f);
  if (sections.size() <= audit_limit) {
    for (const auto& sec : sections) {
      ++out.sections_checked;
      if (!same_map(build(sec), out.map)) out.independent = false;
    }
  } else {
    out.independent = false;
  }
  return out;
}

bool tower_stabilized(const ShriekReport& first, const ShriekReport& second) {
  return is_isomorphism(first.map) && is_isomorphism(second.map);
}

LocalGroup local_group(const IsogenyPair& p, const std::vector<std::size_t>& stabilizer) {
  const std::size_t r = p.ybar.num_generators();
  IntMatrix nv(r, r), ivy(r, 0);
  for (std::size_t h : stabilizer) {
    nv = nv + p.ybar.act(h);
    ivy = IntMatrix::hcat(ivy, (p.ybar.act(h) - IntMatrix::identity(r)) * p.y_basis);
  }
  return {stabilizer, Subquotient(IntMatrix(r, 0), kernel_basis(nv), ivy)};
}

IntMatrix lv_matrix(const IsogenyPair& p, const GammaSet& places, const DecompositionData& d) {
  const FiniteGroup& g = places.group();
  const std::size_t r = p.ybar.num_generators();
  IntMatrix m(r, r * places.size());
  for (std::size_t t : d.coset_reps) {
    const std::size_t w = places.act(g.inv(t), d.place);
    IntMatrix cur = m.block(0, w * r, r, r) + p.ybar.act(t);
    m.set_block(0, w * r, cur);
  }
  return m;
}

LvReport l_v(const IsogenyPair& p, const Level& level, const YbarGroup& g, const DecompositionData& d, bool audit) {
  validate_transversal(level.group(), d);
  LvReport out;
  out.local = local_group(p, d.stabilizer);
  auto build = [&](const DecompositionData& dd) {
    return make_group_map(g.group.group(), out.local.group.group(),
                          induced_map(g.group, out.local.group, lv_matrix(p, level.places(), dd)));
  };
  out.map = build(d);
  out.independent = true;
  if (audit) {
    for (const auto& reps : all_transversals(level.group(), d)) {
      DecompositionData dd = d;
      dd.coset_reps = reps;
      ++out.transversals_checked;
      if (!same_map(build(dd), out.map)) out.independent = false;
    }
  }
  return out;
}

SigmaReport sigma_exactness(const IsogenyPair& p, const Level& level, const Int& budget) {
  YbarGroup g = ybar_group(p, level);
  const std::size_t r = p.ybar.num_generators();
  SigmaReport out;
  out.global = g.group.group();
  IntMatrix iy = augmentation_image(p.ybar, p.y_basis);
  Subquotient c(IntMatrix(r, 0), kernel_basis(norm_matrix(p.ybar)), iy);
  out.target = c.group();

  std::vector<FinAbGroup> parts;
  std::vector<GroupMap> into, outof;
  std::vector<std::size_t> dotted = level.system.section;
  std::sort(dotted.begin(), dotted.end());
  for (std::size_t v : dotted) {
    LvReport lv = l_v(p, level, g, make_decomposition(level.places(), v), false);
    parts.push_back(lv.local.group.group());
    into.push_back(lv.map);
    outof.push_back(make_group_map(lv.local.group.group(), c.group(),
                                   induced_map(lv.local.group, c, IntMatrix::identity(r))));
  }
  DirectSum ds = direct_sum_of(parts);
  out.locals = ds.group;
  GroupMap lmap = map_into_sum(out.global, ds, into);
  GroupMap sigma = map_out_of_sum(ds, c.group(), outof);
  out.composite_zero = is_zero_map(compose(sigma, lmap));
  out.exact = exact_at(lmap, sigma);
  out.kernel_order = morphism_kernel_image(sigma).kernel.order();
  out.image_order = morphism_kernel_image(lmap).image.order();
  out.localization = lmap;
  out.sigma = sigma;

  if (ds.group.order() <= budget && out.global.order() <= budget) {
    std::set<IntVector> kernel, image;
    ds.group.for_each_element([&](const IntVector& x) {
      if (is_zero(out.target.reduce(apply_map(sigma, x)))) kernel.insert(ds.group.reduce(x));
      return true;
    });
    out.global.for_each_element([&](const IntVector& x) {
      image.insert(ds.group.reduce(apply_map(lmap, x)));
      return true;
    });
    out.enumerated = kernel == image;
  } else {
    out.out_of_budget = true;
  }
  return out;
}

ComponentGroup component_group(const IsogenyPair& p, const Int& budget) {
  validate_pair(p);
  const std::size_t r = p.ybar.num_generators();
  const IntMatrix iy = augmentation_image(p.ybar, p.y_basis);
  ComponentGroup out;
  out.quotient = Subquotient::whole(iy.cols() ? iy : IntMatrix(r, 0));
  Subquotient tor = out.quotient.torsion();
  out.torsion = tor.group();
  out.dual = dual_group(out.torsion);
  if (out.torsion.is_trivial()) {
    out.left_nondegenerate = true;
    return out;
  }
  if (out.torsion.order() > budget) return out;
  // Characters chi : Ybar -> Z/e killing I Y, e the exponent of the torsion.
  const Int e = out.torsion.exponent();
  IntMatrix chars = iy.cols() ? solution_lattice(iy.transpose(), scalar(iy.cols(), e), r) : IntMatrix::identity(r);
  bool ok = true;
  out.torsion.for_each_element([&](const IntVector& a) {
    if (is_zero(out.torsion.reduce(a))) return true;
    const IntVector x = tor.represent(a);
    bool seen = false;
    for (std::size_t j = 0; j < chars.cols() && !seen; ++j) {
      Int v = 0;
      for (std::size_t i = 0; i < r; ++i) v += chars(i, j) * x[i];
      if (mod(v, e) != 0) seen = true;
    }
    if (!seen) ok = false;
    return ok;
  });
  out.left_nondegenerate = ok;
  return out;
}

}  // namespace rif

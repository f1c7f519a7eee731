#include "rif/module.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace rif {

namespace {

bool columns_vanish(const FinAbGroup& g, const IntMatrix& m) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!g.is_zero(m.column(j))) return false;
  return true;
}

// Ambient generators of {x : C x in <T>}.
IntMatrix scalar_relations(std::size_t dim, const Int& n) {
  if (n == 0) return IntMatrix(dim, 0);
  return IntMatrix::identity(dim).scaled(n);
}

}  // namespace

GammaModule::GammaModule(FiniteGroup gamma, IntMatrix relations, std::vector<IntMatrix> action)
    : gamma_(std::move(gamma)), relations_(std::move(relations)), action_(std::move(action)) {
  const std::size_t g = relations_.rows();
  if (action_.size() != gamma_.order())
    throw std::invalid_argument("module needs one action matrix per group element (" +
                                std::to_string(gamma_.order()) + "), got " + std::to_string(action_.size()));
  for (std::size_t a = 0; a < action_.size(); ++a)
    if (action_[a].rows() != g || action_[a].cols() != g)
      throw std::invalid_argument("action matrix of element " + std::to_string(a) + " is " +
                                  std::to_string(action_[a].rows()) + "x" + std::to_string(action_[a].cols()) +
                                  ", expected " + std::to_string(g) + "x" + std::to_string(g));
  group_ = FinAbGroup::cokernel(relations_);
  for (std::size_t a = 0; a < action_.size(); ++a)
    if (!columns_vanish(group_, action_[a] * relations_))
      throw std::invalid_argument("action of element " + std::to_string(a) + " does not preserve the relations");
  if (!columns_vanish(group_, action_[gamma_.identity()] - IntMatrix::identity(g)))
    throw std::invalid_argument("identity element acts nontrivially");
  for (std::size_t s : gamma_.generating_set())
    for (std::size_t b = 0; b < gamma_.order(); ++b)
      if (!columns_vanish(group_, action_[s] * action_[b] - action_[gamma_.mul(s, b)]))
        throw std::invalid_argument("action not multiplicative at (" + std::to_string(s) + "," +
                                    std::to_string(b) + ")");
}

GammaModule GammaModule::from_generators(const FiniteGroup& gamma, const IntMatrix& relations,
                                         const std::map<std::size_t, IntMatrix>& gen_action) {
  const std::size_t g = relations.rows();
  std::vector<std::optional<IntMatrix>> act(gamma.order());
  act[gamma.identity()] = IntMatrix::identity(g);
  std::deque<std::size_t> queue{gamma.identity()};
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (const auto& [s, m] : gen_action) {
      if (s >= gamma.order()) throw std::invalid_argument("action given for unknown element " + std::to_string(s));
      std::size_t y = gamma.mul(s, x);
      if (act[y]) continue;
      act[y] = m * *act[x];
      queue.push_back(y);
    }
  }
  std::vector<IntMatrix> full;
  for (std::size_t x = 0; x < gamma.order(); ++x) {
    if (!act[x]) throw std::invalid_argument("given actions do not generate the group");
    full.push_back(*act[x]);
  }
  return GammaModule(gamma, relations, std::move(full));
}

GammaModule GammaModule::trivial(const FiniteGroup& gamma, const IntMatrix& relations) {
  return GammaModule(gamma, relations,
                     std::vector<IntMatrix>(gamma.order(), IntMatrix::identity(relations.rows())));
}

GammaModule GammaModule::trivial_cyclic(const FiniteGroup& gamma, const Int& n) {
  return trivial(gamma, scalar_relations(1, n));
}

GammaModule GammaModule::lattice(const FiniteGroup& gamma, std::vector<IntMatrix> action) {
  std::size_t g = action.empty() ? 0 : action[0].rows();
  return GammaModule(gamma, IntMatrix(g, 0), std::move(action));
}

GammaModule GammaModule::zero(const FiniteGroup& gamma) { return trivial(gamma, IntMatrix(0, 0)); }

bool is_module_map(const GammaModule& m, const GammaModule& n, const IntMatrix& f) {
  if (f.rows() != n.num_generators() || f.cols() != m.num_generators()) return false;
  if (m.gamma().table() != n.gamma().table()) return false;
  if (!columns_vanish(n.group(), f * m.relations())) return false;
  for (std::size_t g = 0; g < m.gamma().order(); ++g)
    if (!columns_vanish(n.group(), f * m.act(g) - n.act(g) * f)) return false;
  return true;
}

void require_module_map(const GammaModule& m, const GammaModule& n, const IntMatrix& f) {
  if (!is_module_map(m, n, f)) throw std::invalid_argument("map is not Gamma-equivariant");
}

CanonicalModule canonical_module(const GammaModule& m) {
  const FinAbGroup& g = m.group();
  const std::size_t k = g.num_factors();
  std::vector<IntMatrix> act;
  for (const auto& a : m.action())
    act.push_back(k ? g.to_canonical() * a * g.from_canonical() : IntMatrix(0, 0));
  IntMatrix to = k ? g.to_canonical() : IntMatrix(0, m.num_generators());
  IntMatrix from = k ? g.from_canonical() : IntMatrix(m.num_generators(), 0);
  return {GammaModule(m.gamma(), FinAbGroup::standard(g.factors()).relations(), std::move(act)), to, from};
}

Submodule make_submodule(const GammaModule& m, const IntMatrix& generators) {
  const std::size_t g = m.num_generators();
  Subquotient sq(m.relations(), generators.cols() ? generators : IntMatrix(g, 0), IntMatrix(g, 0));
  IntMatrix lifts = sq.generator_lifts();
  const std::size_t k = sq.group().num_factors();
  std::vector<IntMatrix> act;
  for (std::size_t x = 0; x < m.gamma().order(); ++x) {
    IntMatrix b(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      IntVector y = m.act(x) * lifts.column(j);
      if (!sq.contains(y)) throw std::invalid_argument("subgroup is not Gamma-stable");
      b.set_column(j, sq.classify(y));
    }
    act.push_back(std::move(b));
  }
  return {GammaModule(m.gamma(), FinAbGroup::standard(sq.group().factors()).relations(), std::move(act)),
          k ? lifts : IntMatrix(g, 0)};
}

Submodule kernel_submodule(const GammaModule& m, const IntMatrix& constraints,
                           const IntMatrix& target_relations) {
  return make_submodule(m, solution_lattice(constraints, target_relations, m.num_generators()));
}

GammaModule quotient_module(const GammaModule& m, const IntMatrix& generators) {
  return GammaModule(m.gamma(), IntMatrix::hcat(m.relations(), generators), m.action());
}

GammaModule direct_sum(const GammaModule& a, const GammaModule& b) {
  std::vector<IntMatrix> act;
  for (std::size_t x = 0; x < a.gamma().order(); ++x) act.push_back(IntMatrix::block_diagonal({a.act(x), b.act(x)}));
  return GammaModule(a.gamma(), IntMatrix::block_diagonal({a.relations(), b.relations()}), std::move(act));
}

GammaModule induced_module(const GammaSet& x, const GammaModule& a) {
  if (x.group().table() != a.gamma().table()) throw std::invalid_argument("Gamma-set and module over different groups");
  const std::size_t g = a.num_generators(), n = x.size();
  std::vector<IntMatrix> act;
  for (std::size_t s = 0; s < a.gamma().order(); ++s) {
    IntMatrix m(n * g, n * g);
    for (std::size_t p = 0; p < n; ++p) m.set_block(x.act(s, p) * g, p * g, a.act(s));
    act.push_back(std::move(m));
  }
  return GammaModule(a.gamma(), IntMatrix::repeat_diagonal(a.relations(), n), std::move(act));
}

GammaModule permutation_module(const GammaSet& x, const Int& n) {
  return induced_module(x, GammaModule::trivial_cyclic(x.group(), n));
}

Submodule augmentation_kernel(const GammaSet& x, const GammaModule& a) {
  const std::size_t g = a.num_generators();
  IntMatrix sum(g, g * x.size());
  for (std::size_t p = 0; p < x.size(); ++p) sum.set_block(0, p * g, IntMatrix::identity(g));
  return kernel_submodule(induced_module(x, a), sum, a.relations());
}

GammaModule gamma_times_places(const GammaSet& places, const Int& n) {
  const FiniteGroup& gamma = places.group();
  const std::size_t s = places.size(), o = gamma.order();
  std::vector<Perm> act(o, Perm(o * s));
  for (std::size_t g = 0; g < o; ++g)
    for (std::size_t a = 0; a < o; ++a)
      for (std::size_t w = 0; w < s; ++w) act[g][a * s + w] = gamma.mul(g, a) * s + places.act(g, w);
  return permutation_module(GammaSet(gamma, std::move(act)), n);
}

Submodule double_augmentation_kernel(const GammaSet& places, const Int& n,
                                     const std::optional<std::vector<std::size_t>>& section) {
  const FiniteGroup& gamma = places.group();
  const std::size_t s = places.size(), o = gamma.order();
  GammaModule ambient = gamma_times_places(places, n);
  std::vector<IntVector> rows;
  for (std::size_t a = 0; a < o; ++a) {
    IntVector r(o * s, Int(0));
    for (std::size_t w = 0; w < s; ++w) r[a * s + w] = 1;
    rows.push_back(r);
  }
  for (std::size_t w = 0; w < s; ++w) {
    IntVector r(o * s, Int(0));
    for (std::size_t a = 0; a < o; ++a) r[a * s + w] = 1;
    rows.push_back(r);
  }
  if (section) {
    for (std::size_t a = 0; a < o; ++a) {
      std::vector<bool> dotted(s, false);
      for (std::size_t v : *section) dotted[places.act(a, v)] = true;
      for (std::size_t w = 0; w < s; ++w)
        if (!dotted[w]) rows.push_back(unit(o * s, a * s + w));
    }
  }
  IntMatrix c = IntMatrix::from_columns(rows, o * s).transpose();
  return kernel_submodule(ambient, c, scalar_relations(rows.size(), n));
}

IntMatrix norm_matrix(const GammaModule& m) {
  IntMatrix n(m.num_generators(), m.num_generators());
  for (const auto& a : m.action()) n = n + a;
  return n;
}

IntMatrix augmentation_submodule_generators(const GammaModule& m) {
  IntMatrix out(m.num_generators(), 0);
  for (std::size_t s : m.gamma().generating_set())
    out = IntMatrix::hcat(out, m.act(s) - IntMatrix::identity(m.num_generators()));
  return out;
}

IntMatrix norm_kernel_generators(const GammaModule& m) {
  return solution_lattice(norm_matrix(m), m.relations(), m.num_generators());
}

IntMatrix fixed_point_generators(const GammaModule& m) {
  const std::size_t g = m.num_generators();
  IntMatrix c(0, g), t(0, 0);
  for (std::size_t s : m.gamma().generating_set()) {
    c = IntMatrix::vcat(c, m.act(s) - IntMatrix::identity(g));
    t = IntMatrix::block_diagonal({t, m.relations()});
  }
  return solution_lattice(c, t, g);
}

GammaModule restrict_module(const GammaModule& m, const Subgroup& h) {
  std::vector<IntMatrix> act;
  for (std::size_t x : h.embed) act.push_back(m.act(x));
  return GammaModule(h.group, m.relations(), std::move(act));
}

GammaModule inflate_module(const GammaModule& m, const FiniteGroup& big, const std::vector<std::size_t>& pi) {
  if (!is_homomorphism(big, m.gamma(), pi)) throw std::invalid_argument("inflation along a non-homomorphism");
  std::vector<bool> hit(m.gamma().order(), false);
  for (std::size_t x : pi) hit[x] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw std::invalid_argument("inflation along a non-surjective map");
  std::vector<IntMatrix> act;
  for (std::size_t x = 0; x < big.order(); ++x) act.push_back(m.act(pi[x]));
  return GammaModule(big, m.relations(), std::move(act));
}

GammaModule deflate_module(const GammaModule& m, const QuotientGroup& q) {
  std::vector<std::optional<IntMatrix>> act(q.group.order());
  for (std::size_t x = 0; x < m.gamma().order(); ++x) {
    auto& slot = act[q.proj[x]];
    if (!slot)
      slot = m.act(x);
    else if (!columns_vanish(m.group(), *slot - m.act(x)))
      throw std::invalid_argument("kernel of the quotient acts nontrivially");
  }
  std::vector<IntMatrix> out;
  for (auto& a : act) out.push_back(*a);
  return GammaModule(q.group, m.relations(), std::move(out));
}

GammaModule dual_module(const GammaModule& a) {
  if (!a.is_finite()) throw std::invalid_argument("dual of an infinite module");
  CanonicalModule c = canonical_module(a);
  const IntVector& f = a.group().factors();
  const std::size_t k = f.size();
  std::vector<IntMatrix> act;
  for (std::size_t x = 0; x < a.gamma().order(); ++x) {
    const IntMatrix& b = c.module.act(a.gamma().inv(x));
    IntMatrix d(k, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i) {
        Int num = f[j] * b(i, j);
        if (num % f[i] != 0) throw std::logic_error("dual action is not integral");
        d(j, i) = mod(num / f[i], f[j]);
      }
    act.push_back(std::move(d));
  }
  return GammaModule(a.gamma(), c.module.relations(), std::move(act));
}

// ---------------------------------------------------------------------------

void PlaceSystem::validate() const {
  if (modulus < 1) throw std::invalid_argument("modulus must be at least 1");
  auto orbits = places.orbits();
  if (section.size() != orbits.size())
    throw std::invalid_argument("section has " + std::to_string(section.size()) + " places for " +
                                std::to_string(orbits.size()) + " orbits");
  for (const auto& o : orbits) {
    std::size_t hits = 0;
    for (std::size_t v : section)
      if (std::binary_search(o.begin(), o.end(), v)) ++hits;
    if (hits != 1)
      throw std::invalid_argument("section meets the orbit of place " + std::to_string(o[0]) + " " +
                                  std::to_string(hits) + " times");
  }
  if (ambient && ambient->group().table() != places.group().table())
    throw std::invalid_argument("ambient places over a different group");
}

bool PlaceSystem::in_section(std::size_t w) const {
  return std::find(section.begin(), section.end(), w) != section.end();
}

std::size_t PlaceSystem::section_point(std::size_t w) const {
  auto o = places.orbit(w);
  for (std::size_t v : section)
    if (std::binary_search(o.begin(), o.end(), v)) return v;
  throw std::invalid_argument("place " + std::to_string(w) + " has no dotted representative");
}

ConditionReport check_place_conditions(const PlaceSystem& p) {
  ConditionReport r;
  r.ramification_ok = p.ramification_ok;
  r.class_group_ok = p.class_group_ok;
  const FiniteGroup& g = p.places.group();
  if (!p.ambient) {
    r.stabilizers_vacuous = true;
  } else {
    std::vector<std::vector<std::size_t>> stabs;
    for (std::size_t w = 0; w < p.places.size(); ++w) stabs.push_back(p.places.stabilizer(w));
    for (std::size_t u = 0; u < p.ambient->size(); ++u)
      if (std::find(stabs.begin(), stabs.end(), p.ambient->stabilizer(u)) == stabs.end())
        r.stabilizer_violators.push_back(u);
    r.stabilizers_covered = r.stabilizer_violators.empty();
  }
  for (std::size_t s = 0; s < g.order(); ++s) {
    bool fixes = false;
    for (std::size_t v : p.section) fixes = fixes || p.places.is_fixed(s, v);
    if (!fixes) r.dotted_fixed_violators.push_back(s);
  }
  r.dotted_fixed = r.dotted_fixed_violators.empty();
  return r;
}

DecompositionData make_decomposition(const GammaSet& places, std::size_t place) {
  if (place >= places.size()) throw std::invalid_argument("place out of range");
  const FiniteGroup& g = places.group();
  DecompositionData d;
  d.place = place;
  d.stabilizer = places.stabilizer(place);
  for (const auto& c : g.right_cosets(d.stabilizer)) d.coset_reps.push_back(c[0]);
  d.coset_reps[0] = g.identity();
  return d;
}

void validate_transversal(const FiniteGroup& g, const DecompositionData& d) {
  if (!g.is_subgroup(d.stabilizer)) throw std::invalid_argument("stabilizer is not a subgroup");
  if (d.coset_reps.empty() || d.coset_reps[0] != g.identity())
    throw std::invalid_argument("trivial coset must be represented by the identity");
  auto cosets = g.right_cosets(d.stabilizer);
  if (cosets.size() != d.coset_reps.size()) throw std::invalid_argument("wrong number of coset representatives");
  std::vector<bool> used(cosets.size(), false);
  for (std::size_t t : d.coset_reps)
    for (std::size_t c = 0; c < cosets.size(); ++c)
      if (std::binary_search(cosets[c].begin(), cosets[c].end(), t)) {
        if (used[c]) throw std::invalid_argument("two representatives in one coset");
        used[c] = true;
      }
}

std::vector<std::vector<std::size_t>> all_transversals(const FiniteGroup& g, const DecompositionData& d) {
  auto cosets = g.right_cosets(d.stabilizer);
  std::vector<std::vector<std::size_t>> out{{g.identity()}};
  for (std::size_t c = 1; c < cosets.size(); ++c) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : out)
      for (std::size_t x : cosets[c]) {
        auto u = t;
        u.push_back(x);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

GammaModule restrict_to_decomposition(const GammaModule& m, const DecompositionData& d) {
  return restrict_module(m, make_subgroup(m.gamma(), d.stabilizer));
}

}  // namespace rif

#include "rif/corpus.hpp"

#include "rif/catalog.hpp"
#include "rif/smith.hpp"

#include <random>

namespace rif {

std::vector<std::size_t> whole_group(const FiniteGroup& g) {
  std::vector<std::size_t> out(g.order());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

PlaceSystem blocks_system(const FiniteGroup& g, const std::vector<std::vector<std::size_t>>& subgroups, const Int& n) {
  if (subgroups.empty()) throw std::invalid_argument("a place system needs at least one block");
  std::optional<GammaSet> x;
  PlaceSystem p;
  for (const auto& h : subgroups) {
    GammaSet b = GammaSet::coset_space(g, h);
    p.section.push_back(x ? x->size() : 0);
    x = x ? GammaSet::disjoint_union(*x, b) : b;
  }
  p.places = *x;
  p.modulus = n;
  return p;
}

Level blocks_level(const FiniteGroup& g, const std::vector<std::vector<std::size_t>>& subgroups, const Int& n,
                   bool allow_violations) {
  return make_level(blocks_system(g, subgroups, n), allow_violations);
}

IsogenyPair scaled_pair(const GammaModule& ybar, long long k) {
  return {ybar, IntMatrix::identity(ybar.num_generators()).scaled(k)};
}

LatticeComplex scaled_complex(const GammaModule& t, long long k) {
  return {t, t, IntMatrix::identity(t.num_generators()).scaled(k)};
}

LatticeComplex augmentation_complex(const FiniteGroup& g) {
  IntMatrix f(1, g.order());
  for (std::size_t i = 0; i < g.order(); ++i) f(0, i) = 1;
  return {regular_lattice(g), GammaModule::trivial_cyclic(g, 0), f};
}

namespace {

std::vector<std::vector<std::size_t>> proper_nontrivial(const FiniteGroup& g) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& h : g.subgroups())
    if (h.size() > 1 && h.size() < g.order()) out.push_back(h);
  return out;
}

}  // namespace

std::vector<PsiInstance> psi_corpus(std::uint32_t seed) {
  std::vector<PsiInstance> out;
  std::mt19937 rng(seed);
  for (const char* gname : {"C2", "C3", "C4", "C2xC2", "S3", "D4"}) {
    FiniteGroup g = named_group(gname);
    const auto all = whole_group(g);
    std::vector<std::vector<std::vector<std::size_t>>> configs = {{all, all}};
    if (g.order() + 1 <= 6) configs.push_back({all, {g.identity()}});
    for (const auto& h : proper_nontrivial(g))
      if (g.order() / h.size() + 1 <= 6) {
        configs.push_back({all, h});
        break;
      }
    const Int p = g.order() % 2 == 0 ? 2 : 3;
    std::vector<std::pair<GammaModule, Int>> coeffs = {{GammaModule::trivial_cyclic(g, p), p},
                                                       {GammaModule::trivial_cyclic(g, p), 2 * p}};
    for (const auto& k : index_two_subgroups(g)) {
      coeffs.push_back({reduce_mod(sign_lattice(g, k), 4), 4});
      break;
    }
    std::vector<GammaModule> small;
    for (const auto& l : lattice_catalog(g))
      if (l.num_generators() == 2) small.push_back(l);
    if (!small.empty()) coeffs.push_back({reduce_mod(small[rng() % small.size()], p), p});
    for (std::size_t c = 0; c < configs.size(); ++c)
      for (const auto& [a, n] : coeffs)
        out.push_back({std::string(gname) + " blocks " + std::to_string(c) + " n=" + to_string(n) + " A=" +
                           a.group().describe(),
                       blocks_level(g, configs[c], n), a});
  }
  return out;
}

std::vector<PairInstance> pair_corpus() {
  std::vector<PairInstance> out;
  for (const char* gname : {"C2", "C3", "C4", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(gname);
    const auto all = whole_group(g);
    std::vector<std::vector<std::vector<std::size_t>>> configs = {{all, {g.identity()}}};
    auto subs = proper_nontrivial(g);
    if (!subs.empty()) configs.push_back({all, subs.front()});
    const long long k = g.order() % 2 == 0 ? 2 : 3;
    for (const auto& y : lattice_catalog(g)) {
      if (y.num_generators() > 2) continue;
      for (std::size_t c = 0; c < configs.size(); ++c)
        out.push_back({std::string(gname) + " rank " + std::to_string(y.num_generators()) + " blocks " +
                           std::to_string(c) + " Y=" + std::to_string(k) + "Ybar",
                       scaled_pair(y, k), blocks_level(g, configs[c], k)});
    }
  }
  FiniteGroup c2 = FiniteGroup::cyclic(2), c4 = FiniteGroup::cyclic(4);
  out.push_back({"C2 swap, index 2", {regular_lattice(c2), IntMatrix::from_rows({{1, 1}, {1, -1}})},
                 blocks_level(c2, {{0, 1}, {0}}, 2)});
  out.push_back({"C4 rotation, index 2", {rotation_lattice(c4), IntMatrix::from_rows({{1, 1}, {-1, 1}})},
                 blocks_level(c4, {{0, 1, 2, 3}, {0, 2}}, 2)});
  return out;
}

std::vector<LevelMap> tower_corpus() {
  std::vector<LevelMap> out;
  // Order 8 is left out: the third level over it has order 16 and dominates the run time.
  for (const char* gname : {"C4", "C2xC2", "S3", "C6"}) {
    FiniteGroup big = named_group(gname);
    const auto all = whole_group(big);
    std::vector<std::vector<std::size_t>> kernels;
    for (const auto& h : proper_nontrivial(big))
      if (big.is_normal(h) && kernels.size() < 2) kernels.push_back(h);
    for (const auto& kernel : kernels) {
      const Int n = (big.order() / kernel.size()) % 2 == 0 ? 2 : 3;
      // Places: fixed, fully split, and with decomposition group the kernel itself.
      std::vector<std::vector<TowerPlace>> layouts = {
          {{all, true}, {{big.identity()}, true}},
          {{all, true}, {kernel, true}, {{big.identity()}, false}},
      };
      for (const auto& places : layouts)
        for (const Int& m : std::vector<Int>{n, 2 * n}) {
          out.push_back(make_tower(big, kernel, places, n, m));
        }
    }
  }
  return out;
}

LevelMap tower_extension(const LevelMap& f) {
  const FiniteGroup& k = f.target.group();
  FiniteGroup bigger = FiniteGroup::product(k, FiniteGroup::cyclic(2));
  std::vector<std::size_t> pi(bigger.order());
  for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = i / 2;
  return inflate_level(f.target, bigger, pi, 2 * f.target.modulus());
}

std::vector<ComplexInstance> complex_corpus(std::uint32_t seed) {
  std::vector<ComplexInstance> out;
  std::mt19937 rng(seed);
  for (const char* gname : {"C2", "C3", "C4", "C2xC2", "S3"}) {
    FiniteGroup g = named_group(gname);
    const std::string base(gname);
    for (const auto& t : lattice_catalog(g)) {
      const std::string rank = " rank " + std::to_string(t.num_generators());
      out.push_back({base + rank + " x2", scaled_complex(t, 2)});
      if (t.num_generators() <= 2) {
        out.push_back({base + rank + " x3", scaled_complex(t, 3)});
        out.push_back({base + rank + " random", {t, t, random_equivariant_map(rng, t, t, 3)}});
      }
    }
    out.push_back({base + " augmentation", augmentation_complex(g)});
  }
  return out;
}

bool is_isogeny(const LatticeComplex& c) {
  const std::size_t r = c.degree0.num_generators();
  return r == c.degree1.num_generators() && c.degree0.group().rank() == r && c.degree1.group().rank() == r &&
         smith_normal_form(c.map).rank == r;
}

}  // namespace rif

#include "rif/catalog.hpp"

#include <algorithm>
#include <stdexcept>

namespace rif {

FiniteGroup named_group(const std::string& name) {
  auto x = name.find('x');
  if (name == "C2xC2") return FiniteGroup::klein4();
  if (x != std::string::npos) {
    FiniteGroup p = FiniteGroup::product(named_group(name.substr(0, x)), named_group(name.substr(x + 1)));
    return FiniteGroup(p.table(), name);
  }
  if (name == "1") return FiniteGroup();
  if (name == "S3") return FiniteGroup::symmetric3();
  if (name == "D4") return FiniteGroup::dihedral4();
  if (name.size() >= 2 && name[0] == 'C') {
    std::size_t n = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') throw std::invalid_argument("unknown group '" + name + "'");
      n = n * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    if (n == 0 || n > 64) throw std::invalid_argument("unsupported cyclic order in '" + name + "'");
    return FiniteGroup::cyclic(n);
  }
  throw std::invalid_argument("unknown group '" + name + "'");
}

GammaModule sign_lattice(const FiniteGroup& g, const std::vector<std::size_t>& kernel) {
  if (!g.is_subgroup(kernel) || kernel.size() * 2 != g.order())
    throw std::invalid_argument("sign character needs an index-2 subgroup");
  std::vector<IntMatrix> act;
  for (std::size_t x = 0; x < g.order(); ++x) {
    bool in = std::find(kernel.begin(), kernel.end(), x) != kernel.end();
    act.push_back(IntMatrix::from_rows({{in ? 1 : -1}}));
  }
  return GammaModule::lattice(g, std::move(act));
}

GammaModule regular_lattice(const FiniteGroup& g) { return permutation_module(GammaSet::regular(g), 0); }

GammaModule rotation_lattice(const FiniteGroup& c) {
  IntMatrix gen;
  switch (c.order()) {
    case 3: gen = IntMatrix::from_rows({{0, -1}, {1, -1}}); break;
    case 4: gen = IntMatrix::from_rows({{0, -1}, {1, 0}}); break;
    case 6: gen = IntMatrix::from_rows({{1, -1}, {1, 0}}); break;
    default: throw std::invalid_argument("no rank-2 rotation lattice for this order");
  }
  return GammaModule::from_generators(c, IntMatrix(2, 0), {{1, gen}});
}

GammaModule s3_standard_lattice(const FiniteGroup& s3) {
  GammaSet three = GammaSet::coset_space(s3, make_subgroup(s3, s3.generate({1})).embed);
  return augmentation_kernel(three, GammaModule::trivial_cyclic(s3, 0)).module;
}

GammaModule reduce_mod(const GammaModule& l, const Int& n) {
  IntMatrix rel = IntMatrix::hcat(l.relations(), IntMatrix::identity(l.num_generators()).scaled(n));
  return GammaModule(l.gamma(), rel, l.action());
}

std::vector<std::vector<std::size_t>> index_two_subgroups(const FiniteGroup& g) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& h : g.subgroups())
    if (h.size() * 2 == g.order()) out.push_back(h);
  return out;
}

std::vector<GammaModule> lattice_catalog(const FiniteGroup& g) {
  std::vector<GammaModule> out;
  out.push_back(GammaModule::trivial_cyclic(g, 0));
  for (const auto& h : index_two_subgroups(g)) out.push_back(sign_lattice(g, h));
  if (g.order() <= 6) out.push_back(regular_lattice(g));
  if (g.is_abelian() && g.generating_set().size() == 1 && g.generate({1}).size() == g.order() &&
      (g.order() == 3 || g.order() == 4 || g.order() == 6))
    out.push_back(rotation_lattice(g));
  if (g.order() == 6 && !g.is_abelian()) out.push_back(s3_standard_lattice(g));
  return out;
}

IntMatrix random_equivariant_map(std::mt19937& rng, const GammaModule& src, const GammaModule& tgt, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntMatrix m(tgt.num_generators(), src.num_generators());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = d(rng);
  const FiniteGroup& g = src.gamma();
  IntMatrix avg(m.rows(), m.cols());
  for (std::size_t x = 0; x < g.order(); ++x) avg = avg + tgt.act(x) * m * src.act(g.inv(x));
  return avg;
}

}  // namespace rif

#include "rif/group.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace rif {

namespace {

std::string triple(std::size_t i, std::size_t j, std::size_t k) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

}  // namespace

FiniteGroup::FiniteGroup() : table_{{0}}, inverse_{0}, identity_(0), name_("1") {}

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
  const std::size_t n = table_.size();
  if (n == 0) throw std::invalid_argument("empty multiplication table");
  for (std::size_t i = 0; i < n; ++i) {
    if (table_[i].size() != n)
      throw std::invalid_argument("multiplication table row " + std::to_string(i) + " has length " +
                                  std::to_string(table_[i].size()) + ", expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j)
      if (table_[i][j] >= n)
        throw std::invalid_argument("multiplication table entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") out of range");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (table_[table_[i][j]][k] != table_[i][table_[j][k]])
          throw std::invalid_argument("associativity violated at " + triple(i, j, k));
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("multiplication table has no identity element");
  inverse_.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (table_[i][j] == identity_ && table_[j][i] == identity_) {
        inverse_[i] = j;
        break;
      }
    if (inverse_[i] == n) throw std::invalid_argument("element " + std::to_string(i) + " has no inverse");
  }
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group of order 0");
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return FiniteGroup(std::move(t), "C" + std::to_string(n));
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<Perm>& gens, std::size_t degree,
                                           std::string name) {
  Perm id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = i;
  auto compose = [&](const Perm& p, const Perm& q) {
    Perm r(degree);
    for (std::size_t i = 0; i < degree; ++i) r[i] = p[q[i]];
    return r;
  };
  std::set<Perm> seen{id};
  std::vector<Perm> frontier{id};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        if (g.size() != degree) throw std::invalid_argument("permutation of wrong degree");
        Perm r = compose(g, p);
        if (seen.insert(r).second) next.push_back(r);
      }
    frontier = std::move(next);
  }
  std::vector<Perm> elems(seen.begin(), seen.end());  // lexicographic: identity first
  std::map<Perm, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
  std::vector<std::vector<std::size_t>> t(elems.size(), std::vector<std::size_t>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) t[i][j] = index.at(compose(elems[i], elems[j]));
  return FiniteGroup(std::move(t), std::move(name));
}

FiniteGroup FiniteGroup::symmetric3() { return from_permutations({{1, 0, 2}, {1, 2, 0}}, 3, "S3"); }

FiniteGroup FiniteGroup::dihedral4() { return from_permutations({{1, 2, 3, 0}, {0, 3, 2, 1}}, 4, "D4"); }

FiniteGroup FiniteGroup::klein4() {
  FiniteGroup k = product(cyclic(2), cyclic(2));
  k.name_ = "C2xC2";
  return k;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order();
  std::vector<std::vector<std::size_t>> t(na * nb, std::vector<std::size_t>(na * nb));
  for (std::size_t i = 0; i < na * nb; ++i)
    for (std::size_t j = 0; j < na * nb; ++j)
      t[i][j] = a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb);
  return FiniteGroup(std::move(t), a.name() + "x" + b.name());
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t i = 0; i < order(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (mul(i, j) != mul(j, i)) return false;
  return true;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t k = 1;
  for (std::size_t x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

std::vector<std::size_t> FiniteGroup::generate(const std::vector<std::size_t>& gens) const {
  std::vector<bool> in(order(), false);
  std::vector<std::size_t> out{identity_};
  in[identity_] = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t g : gens) {
      std::size_t y = mul(out[i], g);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

bool FiniteGroup::is_subgroup(const std::vector<std::size_t>& elems) const {
  if (elems.empty()) return false;
  std::vector<bool> in(order(), false);
  for (std::size_t x : elems) {
    if (x >= order()) return false;
    in[x] = true;
  }
  if (!in[identity_]) return false;
  for (std::size_t x : elems)
    for (std::size_t y : elems)
      if (!in[mul(x, inv(y))]) return false;
  return true;
}

bool FiniteGroup::is_normal(const std::vector<std::size_t>& elems) const {
  if (!is_subgroup(elems)) return false;
  std::vector<bool> in(order(), false);
  for (std::size_t x : elems) in[x] = true;
  for (std::size_t g = 0; g < order(); ++g)
    for (std::size_t x : elems)
      if (!in[mul(mul(g, x), inv(g))]) return false;
  return true;
}

std::vector<std::vector<std::size_t>> FiniteGroup::subgroups() const {
  std::set<std::vector<std::size_t>> found;
  std::vector<std::vector<std::size_t>> queue;
  for (std::size_t g = 0; g < order(); ++g) {
    auto c = generate({g});
    if (found.insert(c).second) queue.push_back(c);
  }
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t g = 0; g < order(); ++g) {
      if (std::binary_search(queue[i].begin(), queue[i].end(), g)) continue;
      std::vector<std::size_t> gens = queue[i];
      gens.push_back(g);
      auto c = generate(gens);
      if (found.insert(c).second) queue.push_back(c);
    }
  std::vector<std::vector<std::size_t>> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

std::vector<std::size_t> FiniteGroup::generating_set() const {
  std::vector<std::size_t> gens;
  std::vector<std::size_t> span = generate({});
  while (span.size() < order()) {
    // add the element that enlarges the span most; ties to the least index
    std::size_t best = 0, best_size = 0;
    for (std::size_t g = 0; g < order(); ++g) {
      if (std::binary_search(span.begin(), span.end(), g)) continue;
      auto trial = gens;
      trial.push_back(g);
      std::size_t s = generate(trial).size();
      if (s > best_size) {
        best = g;
        best_size = s;
      }
    }
    gens.push_back(best);
    span = generate(gens);
  }
  return gens;
}

std::vector<std::vector<std::size_t>> FiniteGroup::right_cosets(const std::vector<std::size_t>& h) const {
  if (!is_subgroup(h)) throw std::invalid_argument("not a subgroup");
  std::vector<bool> seen(order(), false);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> hs = h;
  std::sort(hs.begin(), hs.end());
  out.push_back(hs);
  for (std::size_t x : hs) seen[x] = true;
  for (std::size_t g = 0; g < order(); ++g) {
    if (seen[g]) continue;
    std::vector<std::size_t> c;
    for (std::size_t x : h) c.push_back(mul(x, g));
    std::sort(c.begin(), c.end());
    for (std::size_t x : c) seen[x] = true;
    out.push_back(c);
  }
  return out;
}

std::vector<std::vector<std::size_t>> FiniteGroup::left_cosets(const std::vector<std::size_t>& h) const {
  if (!is_subgroup(h)) throw std::invalid_argument("not a subgroup");
  std::vector<bool> seen(order(), false);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> hs = h;
  std::sort(hs.begin(), hs.end());
  out.push_back(hs);
  for (std::size_t x : hs) seen[x] = true;
  for (std::size_t g = 0; g < order(); ++g) {
    if (seen[g]) continue;
    std::vector<std::size_t> c;
    for (std::size_t x : h) c.push_back(mul(g, x));
    std::sort(c.begin(), c.end());
    for (std::size_t x : c) seen[x] = true;
    out.push_back(c);
  }
  return out;
}

Subgroup make_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& elems) {
  if (!g.is_subgroup(elems)) throw std::invalid_argument("elements do not form a subgroup");
  Subgroup s;
  s.embed = elems;
  std::sort(s.embed.begin(), s.embed.end());
  std::map<std::size_t, std::size_t> index;
  for (std::size_t i = 0; i < s.embed.size(); ++i) index[s.embed[i]] = i;
  std::vector<std::vector<std::size_t>> t(s.embed.size(), std::vector<std::size_t>(s.embed.size()));
  for (std::size_t i = 0; i < s.embed.size(); ++i)
    for (std::size_t j = 0; j < s.embed.size(); ++j) t[i][j] = index.at(g.mul(s.embed[i], s.embed[j]));
  s.group = FiniteGroup(std::move(t));
  return s;
}

QuotientGroup make_quotient(const FiniteGroup& g, const std::vector<std::size_t>& normal) {
  if (!g.is_normal(normal)) throw std::invalid_argument("quotient by a non-normal subgroup");
  auto cosets = g.left_cosets(normal);
  QuotientGroup q;
  q.proj.assign(g.order(), 0);
  for (std::size_t c = 0; c < cosets.size(); ++c)
    for (std::size_t x : cosets[c]) q.proj[x] = c;
  std::vector<std::vector<std::size_t>> t(cosets.size(), std::vector<std::size_t>(cosets.size()));
  for (std::size_t a = 0; a < cosets.size(); ++a)
    for (std::size_t b = 0; b < cosets.size(); ++b) t[a][b] = q.proj[g.mul(cosets[a][0], cosets[b][0])];
  q.group = FiniteGroup(std::move(t));
  return q;
}

bool is_homomorphism(const FiniteGroup& src, const FiniteGroup& tgt, const std::vector<std::size_t>& map) {
  if (map.size() != src.order()) return false;
  for (std::size_t x : map)
    if (x >= tgt.order()) return false;
  for (std::size_t a = 0; a < src.order(); ++a)
    for (std::size_t b = 0; b < src.order(); ++b)
      if (map[src.mul(a, b)] != tgt.mul(map[a], map[b])) return false;
  return true;
}

// ---------------------------------------------------------------------------

GammaSet::GammaSet(FiniteGroup g, std::vector<Perm> action)
    : group_(std::move(g)), action_(std::move(action)) {
  if (action_.size() != group_.order())
    throw std::invalid_argument("action table has " + std::to_string(action_.size()) +
                                " rows, group has order " + std::to_string(group_.order()));
  size_ = action_.empty() ? 0 : action_[0].size();
  for (std::size_t g = 0; g < action_.size(); ++g) {
    if (action_[g].size() != size_) throw std::invalid_argument("ragged action table");
    std::vector<bool> hit(size_, false);
    for (std::size_t x : action_[g]) {
      if (x >= size_ || hit[x])
        throw std::invalid_argument("element " + std::to_string(g) + " does not act by a permutation");
      hit[x] = true;
    }
  }
  for (std::size_t x = 0; x < size_; ++x)
    if (act(group_.identity(), x) != x) throw std::invalid_argument("identity moves point " + std::to_string(x));
  for (std::size_t a = 0; a < group_.order(); ++a)
    for (std::size_t b = 0; b < group_.order(); ++b)
      for (std::size_t x = 0; x < size_; ++x)
        if (act(group_.mul(a, b), x) != act(a, act(b, x)))
          throw std::invalid_argument("action not compatible with multiplication at (" + std::to_string(a) +
                                      "," + std::to_string(b) + ") on point " + std::to_string(x));
}

GammaSet GammaSet::regular(const FiniteGroup& g) {
  std::vector<Perm> a(g.order(), Perm(g.order()));
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y) a[x][y] = g.mul(x, y);
  return GammaSet(g, std::move(a));
}

GammaSet GammaSet::trivial(const FiniteGroup& g, std::size_t points) {
  Perm id(points);
  for (std::size_t i = 0; i < points; ++i) id[i] = i;
  return GammaSet(g, std::vector<Perm>(g.order(), id));
}

GammaSet GammaSet::coset_space(const FiniteGroup& g, const std::vector<std::size_t>& h) {
  auto cosets = g.left_cosets(h);
  std::vector<std::size_t> which(g.order());
  for (std::size_t c = 0; c < cosets.size(); ++c)
    for (std::size_t x : cosets[c]) which[x] = c;
  std::vector<Perm> a(g.order(), Perm(cosets.size()));
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t c = 0; c < cosets.size(); ++c) a[x][c] = which[g.mul(x, cosets[c][0])];
  return GammaSet(g, std::move(a));
}

GammaSet GammaSet::disjoint_union(const GammaSet& a, const GammaSet& b) {
  if (a.group().table() != b.group().table()) throw std::invalid_argument("union over different groups");
  std::vector<Perm> act(a.group().order(), Perm(a.size() + b.size()));
  for (std::size_t g = 0; g < a.group().order(); ++g) {
    for (std::size_t x = 0; x < a.size(); ++x) act[g][x] = a.act(g, x);
    for (std::size_t x = 0; x < b.size(); ++x) act[g][a.size() + x] = a.size() + b.act(g, x);
  }
  return GammaSet(a.group(), std::move(act));
}

std::vector<std::size_t> GammaSet::orbit(std::size_t x) const {
  std::set<std::size_t> o;
  for (std::size_t g = 0; g < group_.order(); ++g) o.insert(act(g, x));
  return {o.begin(), o.end()};
}

std::vector<std::vector<std::size_t>> GammaSet::orbits() const {
  std::vector<bool> seen(size_, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t x = 0; x < size_; ++x) {
    if (seen[x]) continue;
    auto o = orbit(x);
    for (std::size_t y : o) seen[y] = true;
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::size_t> GammaSet::stabilizer(std::size_t x) const {
  std::vector<std::size_t> s;
  for (std::size_t g = 0; g < group_.order(); ++g)
    if (act(g, x) == x) s.push_back(g);
  return s;
}

}  // namespace rif

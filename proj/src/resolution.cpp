#include "rif/resolution.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace rif {

Chain act_chain(const FiniteGroup& g, std::size_t x, const Chain& c) {
  Chain out;
  for (const auto& [key, v] : c) out[{key.first, g.mul(x, key.second)}] += v;
  return out;
}

void add_to(Chain& acc, const Chain& c, const Int& k) {
  for (const auto& [key, v] : c) {
    Int& slot = acc[key];
    slot += k * v;
    if (slot == 0) acc.erase(key);
  }
}

Chain Resolution::apply_boundary(std::size_t k, const Chain& c) const {
  Chain out;
  for (const auto& [key, v] : c) add_to(out, act_chain(gamma_, key.second, boundary(k, key.first)), v);
  return out;
}

namespace {

IntVector to_dense(const Chain& c, std::size_t rank, std::size_t order) {
  IntVector v(rank * order, Int(0));
  for (const auto& [key, x] : c) v[key.first * order + key.second] += x;
  return v;
}

Chain to_chain(const IntVector& v, std::size_t order) {
  Chain c;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) c[{i / order, i % order}] = v[i];
  return c;
}

std::size_t nonzeros(const IntVector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](const Int& x) { return x != 0; }));
}

}  // namespace

SmallResolution::SmallResolution(const FiniteGroup& gamma, std::size_t max_degree) : Resolution(gamma) {
  const std::size_t o = gamma.order();
  ranks_.push_back(1);
  // previous map whose kernel is the next cycle module; starts with the augmentation
  IntMatrix prev(1, o);
  for (std::size_t g = 0; g < o; ++g) prev(0, g) = 1;
  for (std::size_t k = 1; k <= max_degree; ++k) {
    IntMatrix kb = kernel_basis(prev);
    std::vector<IntVector> cands;
    for (std::size_t j = 0; j < kb.cols(); ++j) cands.push_back(kb.column(j));
    std::stable_sort(cands.begin(), cands.end(),
                     [](const IntVector& a, const IntVector& b) { return nonzeros(a) < nonzeros(b); });
    const std::size_t dim = prev.cols();
    IntMatrix span(dim, 0);
    LinearSolver span_solver(span);
    std::vector<Chain> gens;
    for (const auto& v : cands) {
      if (span_solver.solvable(v)) continue;
      Chain c = to_chain(v, o);
      gens.push_back(c);
      for (std::size_t g = 0; g < o; ++g) span = IntMatrix::hcat(span, IntMatrix::column_vector(to_dense(act_chain(gamma, g, c), dim / o, o)));
      span_solver = LinearSolver(span);
    }
    ranks_.push_back(gens.size());
    IntMatrix d(dim, gens.size() * o);
    for (std::size_t j = 0; j < gens.size(); ++j)
      for (std::size_t g = 0; g < o; ++g) d.set_column(j * o + g, to_dense(act_chain(gamma, g, gens[j]), dim / o, o));
    boundaries_.push_back(std::move(gens));
    solvers_.emplace_back(d);
    dense_.push_back(d);
    prev = std::move(d);
  }
}

Chain SmallResolution::lift(std::size_t k, const Chain& z) const {
  const FiniteGroup& g = gamma();
  if (k == 0) {
    Int c = z.count({0, 0}) ? z.at({0, 0}) : Int(0);
    if (c == 0) return {};
    return {{{0, g.identity()}, c}};
  }
  if (k > max_degree()) throw std::out_of_range("resolution computed only to degree " + std::to_string(max_degree()));
  auto x = solvers_[k - 1].solve(to_dense(z, ranks_[k - 1], g.order()));
  if (!x) throw std::logic_error("lift of a non-cycle");
  return to_chain(*x, g.order());
}

BarResolution::BarResolution(const FiniteGroup& gamma, std::size_t max_degree)
    : Resolution(gamma), max_degree_(max_degree) {}

std::size_t BarResolution::rank(std::size_t k) const {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= gamma().order();
  return r;
}

std::vector<std::size_t> BarResolution::decode(std::size_t k, std::size_t j) const {
  std::vector<std::size_t> t(k);
  for (std::size_t i = k; i-- > 0;) {
    t[i] = j % gamma().order();
    j /= gamma().order();
  }
  return t;
}

std::size_t BarResolution::encode(const std::vector<std::size_t>& t) const {
  std::size_t j = 0;
  for (std::size_t x : t) j = j * gamma().order() + x;
  return j;
}

Chain BarResolution::boundary(std::size_t k, std::size_t j) const {
  const FiniteGroup& g = gamma();
  auto t = decode(k, j);
  Chain out;
  auto put = [&](const std::vector<std::size_t>& s, std::size_t x, int sign) {
    add_to(out, Chain{{{encode(s), x}, Int(1)}}, sign);
  };
  put(std::vector<std::size_t>(t.begin() + 1, t.end()), t[0], 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    std::vector<std::size_t> s;
    for (std::size_t a = 0; a < k; ++a) {
      if (a == i) {
        s.push_back(g.mul(t[i], t[i + 1]));
        ++a;
      } else {
        s.push_back(t[a]);
      }
    }
    put(s, g.identity(), (i + 1) % 2 ? -1 : 1);
  }
  put(std::vector<std::size_t>(t.begin(), t.end() - 1), g.identity(), k % 2 ? -1 : 1);
  return out;
}

// Contracting homotopy g [g1|...|gk] -> [g|g1|...|gk].
Chain BarResolution::lift(std::size_t k, const Chain& z) const {
  const FiniteGroup& g = gamma();
  if (k == 0) {
    Int c = z.count({0, 0}) ? z.at({0, 0}) : Int(0);
    if (c == 0) return {};
    return {{{0, g.identity()}, c}};
  }
  Chain out;
  const std::size_t shift = rank(k - 1);
  for (const auto& [key, v] : z) add_to(out, Chain{{{key.second * shift + key.first, g.identity()}, v}});
  return out;
}

std::shared_ptr<const SmallResolution> standard_resolution(const FiniteGroup& g) {
  static std::mutex mu;
  static std::map<std::vector<std::vector<std::size_t>>, std::shared_ptr<const SmallResolution>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(g.table());
  if (it != cache.end()) return it->second;
  auto r = std::make_shared<const SmallResolution>(g, 5);
  cache.emplace(g.table(), r);
  return r;
}

std::vector<std::vector<Chain>> lift_chain_map(const Resolution& src, const Resolution& tgt,
                                               const std::vector<std::size_t>& rho, std::size_t max_degree) {
  if (!is_homomorphism(src.gamma(), tgt.gamma(), rho)) throw std::invalid_argument("chain map along a non-homomorphism");
  std::vector<std::vector<Chain>> alpha;
  alpha.push_back({Chain{{{0, tgt.gamma().identity()}, Int(1)}}});
  for (std::size_t k = 1; k <= max_degree; ++k) {
    std::vector<Chain> row;
    for (std::size_t j = 0; j < src.rank(k); ++j) {
      Chain image;
      for (const auto& [key, v] : src.boundary(k, j))
        add_to(image, act_chain(tgt.gamma(), rho[key.second], alpha[k - 1][key.first]), v);
      row.push_back(tgt.lift(k, image));
    }
    alpha.push_back(std::move(row));
  }
  return alpha;
}

IntMatrix cochain_relations(const Resolution& r, const GammaModule& m, std::size_t k) {
  return IntMatrix::repeat_diagonal(m.relations(), r.rank(k));
}

IntMatrix cochain_differential(const Resolution& r, const GammaModule& m, std::size_t k) {
  const std::size_t g = m.num_generators();
  IntMatrix d(g * r.rank(k + 1), g * r.rank(k));
  for (std::size_t j = 0; j < r.rank(k + 1); ++j) {
    std::map<std::size_t, IntMatrix> blocks;
    for (const auto& [key, v] : r.boundary(k + 1, j)) {
      auto it = blocks.find(key.first);
      if (it == blocks.end()) it = blocks.emplace(key.first, IntMatrix(g, g)).first;
      it->second = it->second + m.act(key.second).scaled(v);
    }
    for (const auto& [i, b] : blocks) d.set_block(j * g, i * g, b);
  }
  return d;
}

IntMatrix cochain_pullback(const std::vector<Chain>& alpha_k, std::size_t tgt_rank, const GammaModule& m) {
  const std::size_t g = m.num_generators();
  IntMatrix p(g * alpha_k.size(), g * tgt_rank);
  for (std::size_t j = 0; j < alpha_k.size(); ++j) {
    std::map<std::size_t, IntMatrix> blocks;
    for (const auto& [key, v] : alpha_k[j]) {
      auto it = blocks.find(key.first);
      if (it == blocks.end()) it = blocks.emplace(key.first, IntMatrix(g, g)).first;
      it->second = it->second + m.act(key.second).scaled(v);
    }
    for (const auto& [i, b] : blocks) p.set_block(j * g, i * g, b);
  }
  return p;
}

}  // namespace rif

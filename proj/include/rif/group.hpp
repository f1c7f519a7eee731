#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rif {

using Perm = std::vector<std::size_t>;

// A finite group given by its multiplication table, validated on construction.
class FiniteGroup {
 public:
  FiniteGroup();  // trivial group
  explicit FiniteGroup(std::vector<std::vector<std::size_t>> table, std::string name = "");

  static FiniteGroup cyclic(std::size_t n);
  static FiniteGroup symmetric3();
  static FiniteGroup dihedral4();
  static FiniteGroup klein4();
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);  // (i, j) -> i * |b| + j
  // Closure of permutations of {0..degree-1} under composition, sorted so the identity is first.
  static FiniteGroup from_permutations(const std::vector<Perm>& gens, std::size_t degree,
                                       std::string name = "");

  std::size_t order() const { return table_.size(); }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  std::size_t identity() const { return identity_; }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }
  const std::string& name() const { return name_; }
  bool is_abelian() const;
  std::size_t element_order(std::size_t a) const;

  // Subgroups as sorted element lists.
  std::vector<std::size_t> generate(const std::vector<std::size_t>& gens) const;
  bool is_subgroup(const std::vector<std::size_t>& elems) const;
  bool is_normal(const std::vector<std::size_t>& elems) const;
  std::vector<std::vector<std::size_t>> subgroups() const;  // by size, then lexicographic
  std::vector<std::size_t> generating_set() const;          // greedy, small
  // Cosets H g (right) or g H (left), each sorted, ordered by least element with H first.
  std::vector<std::vector<std::size_t>> right_cosets(const std::vector<std::size_t>& h) const;
  std::vector<std::vector<std::size_t>> left_cosets(const std::vector<std::size_t>& h) const;

 private:
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
  std::string name_;
};

// A subgroup as a group in its own right; embed[i] is the ambient index of element i.
struct Subgroup {
  FiniteGroup group;
  std::vector<std::size_t> embed;
};
Subgroup make_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& elems);

struct QuotientGroup {
  FiniteGroup group;
  std::vector<std::size_t> proj;  // ambient element -> coset index
};
QuotientGroup make_quotient(const FiniteGroup& g, const std::vector<std::size_t>& normal);

bool is_homomorphism(const FiniteGroup& src, const FiniteGroup& tgt, const std::vector<std::size_t>& map);

// A finite set with a left action, act(g, x), validated on construction.
class GammaSet {
 public:
  GammaSet() = default;
  GammaSet(FiniteGroup g, std::vector<Perm> action);

  static GammaSet regular(const FiniteGroup& g);
  static GammaSet trivial(const FiniteGroup& g, std::size_t points);
  // Left cosets g H; point 0 is H itself.
  static GammaSet coset_space(const FiniteGroup& g, const std::vector<std::size_t>& h);
  static GammaSet disjoint_union(const GammaSet& a, const GammaSet& b);

  const FiniteGroup& group() const { return group_; }
  std::size_t size() const { return size_; }
  std::size_t act(std::size_t g, std::size_t x) const { return action_[g][x]; }
  const std::vector<Perm>& action() const { return action_; }

  std::vector<std::vector<std::size_t>> orbits() const;  // each sorted, by least element
  std::vector<std::size_t> orbit(std::size_t x) const;
  std::vector<std::size_t> stabilizer(std::size_t x) const;
  bool is_fixed(std::size_t g, std::size_t x) const { return act(g, x) == x; }

 private:
  FiniteGroup group_;
  std::size_t size_ = 0;
  std::vector<Perm> action_;
};

}  // namespace rif

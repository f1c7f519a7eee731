#pragma once

#include "rif/abelian.hpp"
#include "rif/group.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rif {

// Z^g / <relations> with a left action of a finite group, one matrix per element.
// Invariants (checked): identity acts trivially, act(a) act(b) = act(ab) and
// every action matrix preserves the relation lattice.
class GammaModule {
 public:
  GammaModule() = default;
  GammaModule(FiniteGroup gamma, IntMatrix relations, std::vector<IntMatrix> action);

  // Actions given for a generating set only; the rest is derived by products.
  static GammaModule from_generators(const FiniteGroup& gamma, const IntMatrix& relations,
                                     const std::map<std::size_t, IntMatrix>& gen_action);
  static GammaModule trivial(const FiniteGroup& gamma, const IntMatrix& relations);
  static GammaModule trivial_cyclic(const FiniteGroup& gamma, const Int& n);  // Z/n, 0 = Z
  static GammaModule lattice(const FiniteGroup& gamma, std::vector<IntMatrix> action);
  static GammaModule zero(const FiniteGroup& gamma);

  const FiniteGroup& gamma() const { return gamma_; }
  std::size_t num_generators() const { return relations_.rows(); }
  const IntMatrix& relations() const { return relations_; }
  const IntMatrix& act(std::size_t g) const { return action_[g]; }
  const std::vector<IntMatrix>& action() const { return action_; }
  const FinAbGroup& group() const { return group_; }
  bool is_finite() const { return group_.is_finite(); }

  IntVector act(std::size_t g, const IntVector& x) const { return action_[g] * x; }
  bool equal(const IntVector& x, const IntVector& y) const { return group_.equal(x, y); }
  bool is_zero(const IntVector& x) const { return group_.is_zero(x); }

 private:
  FiniteGroup gamma_;
  IntMatrix relations_;
  std::vector<IntMatrix> action_;
  FinAbGroup group_;
};

// F : M -> N on presentation coordinates: relations carried into relations and
// F act_M(g) = act_N(g) F modulo the relations of N.
bool is_module_map(const GammaModule& m, const GammaModule& n, const IntMatrix& f);
void require_module_map(const GammaModule& m, const GammaModule& n, const IntMatrix& f);

// The same module presented on its canonical coordinates.
struct CanonicalModule {
  GammaModule module;
  IntMatrix to, from;  // presentation <-> canonical, both module maps
};
CanonicalModule canonical_module(const GammaModule& m);

// A Gamma-stable subgroup presented on its own canonical generators.
struct Submodule {
  GammaModule module;
  IntMatrix inclusion;  // ambient gens x sub gens
};
// Generated (as an abelian group) by the given ambient columns; throws if not Gamma-stable.
Submodule make_submodule(const GammaModule& m, const IntMatrix& generators);
// Solutions of C x in <target_relations>, for C : Z^gens -> Z^t.
Submodule kernel_submodule(const GammaModule& m, const IntMatrix& constraints,
                           const IntMatrix& target_relations);
GammaModule quotient_module(const GammaModule& m, const IntMatrix& generators);

GammaModule direct_sum(const GammaModule& a, const GammaModule& b);

// A[X]: coordinate (x, i) is x * gens(A) + i; g sends block x to block g x via act_A(g).
GammaModule induced_module(const GammaSet& x, const GammaModule& a);
// Z/n[X] (n = 0 gives the permutation lattice Z[X]).
GammaModule permutation_module(const GammaSet& x, const Int& n);
// Sum-zero part of A[X].
Submodule augmentation_kernel(const GammaSet& x, const GammaModule& a);

// Z/n[Gamma x S] with g (s, w) = (g s, g w), coordinate s * |S| + w.
GammaModule gamma_times_places(const GammaSet& places, const Int& n);
// Elements of Z/n[Gamma x S] killed by both coordinate-sum maps; with a section,
// additionally x[(s, w)] = 0 whenever w is not in s(section).
Submodule double_augmentation_kernel(const GammaSet& places, const Int& n,
                                     const std::optional<std::vector<std::size_t>>& section = {});

IntMatrix norm_matrix(const GammaModule& m);
// Generators of I.M: columns of act(s) - 1 for s in a generating set.
IntMatrix augmentation_submodule_generators(const GammaModule& m);
// Ambient generators of ker N.
IntMatrix norm_kernel_generators(const GammaModule& m);
// Ambient generators of the fixed points.
IntMatrix fixed_point_generators(const GammaModule& m);

GammaModule restrict_module(const GammaModule& m, const Subgroup& h);
// M viewed over a larger group through a surjection pi : big -> gamma(M).
GammaModule inflate_module(const GammaModule& m, const FiniteGroup& big, const std::vector<std::size_t>& pi);
// M regarded as a module over a quotient; throws unless the kernel of pi acts trivially.
GammaModule deflate_module(const GammaModule& m, const QuotientGroup& q);

// Hom(A, Q/Z) for finite A, in canonical coordinates of A.
GammaModule dual_module(const GammaModule& a);

// ---------------------------------------------------------------------------

struct PlaceSystem {
  GammaSet places;
  std::vector<std::size_t> section;  // one place per orbit
  bool ramification_ok = true, class_group_ok = true;  // carried as input, never computed
  std::optional<GammaSet> ambient;  // places whose stabilizers the places must cover
  std::string label_e = "E", label_s = "S";
  Int modulus = 1;

  void validate() const;
  bool in_section(std::size_t w) const;
  std::size_t section_point(std::size_t w) const;  // the dotted place in the orbit of w
};

struct ConditionReport {
  bool ramification_ok = true, class_group_ok = true;
  bool stabilizers_covered = true, stabilizers_vacuous = false;
  std::vector<std::size_t> stabilizer_violators;  // ambient places
  bool dotted_fixed = true;
  std::vector<std::size_t> dotted_fixed_violators;  // group elements
  bool all() const { return ramification_ok && class_group_ok && stabilizers_covered && dotted_fixed; }
};
ConditionReport check_place_conditions(const PlaceSystem& p);

// Stabilizer of a place and a transversal of its right cosets Gamma_v t.
struct DecompositionData {
  std::size_t place = 0;
  std::vector<std::size_t> stabilizer;
  std::vector<std::size_t> coset_reps;  // coset_reps[0] is the identity
};
DecompositionData make_decomposition(const GammaSet& places, std::size_t place);
void validate_transversal(const FiniteGroup& g, const DecompositionData& d);
// Every transversal with the identity on the trivial coset.
std::vector<std::vector<std::size_t>> all_transversals(const FiniteGroup& g, const DecompositionData& d);
GammaModule restrict_to_decomposition(const GammaModule& m, const DecompositionData& d);

}  // namespace rif

#pragma once

#include "rif/matrix.hpp"
#include "rif/smith.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rif {

// Z^g / column-span(relations), normalised to invariant factors.
// Canonical coordinates: one per nonunit invariant factor, torsion first
// (ascending under divisibility), free factors (encoded 0) last.
class FinAbGroup {
 public:
  FinAbGroup();  // the zero group on zero generators
  static FinAbGroup cokernel(const IntMatrix& relations);
  static FinAbGroup standard(const IntVector& factors);  // Z/f_1 + ... (0 = Z)
  static FinAbGroup free(std::size_t rank);

  std::size_t num_generators() const { return relations_.rows(); }
  const IntMatrix& relations() const { return relations_; }
  const IntVector& factors() const { return factors_; }
  std::size_t rank() const;  // free rank
  std::size_t num_factors() const { return factors_.size(); }
  bool is_finite() const;
  bool is_trivial() const { return factors_.empty(); }
  Int order() const;     // throws on infinite groups
  Int exponent() const;  // 0 for infinite groups
  IntVector torsion_factors() const;

  // Canonical coordinates of a presentation vector.
  IntVector canonical(const IntVector& x) const;
  // Presentation vector for canonical coordinates.
  IntVector lift(const IntVector& c) const;
  IntVector reduce(const IntVector& c) const;  // reduce canonical coords mod factors
  bool is_zero(const IntVector& x) const;
  bool equal(const IntVector& x, const IntVector& y) const;
  const IntMatrix& to_canonical() const { return to_canon_; }
  const IntMatrix& from_canonical() const { return from_canon_; }

  bool isomorphic(const FinAbGroup& o) const { return factors_ == o.factors_; }
  std::string describe() const;  // e.g. "Z/2 + Z/4 + Z", "0"

  // Canonical coordinates of every element (finite groups only), odometer order.
  std::vector<IntVector> elements() const;
  void for_each_element(const std::function<bool(const IntVector&)>& f) const;

 private:
  IntMatrix relations_;
  IntVector factors_;
  IntMatrix to_canon_;    // k x g
  IntMatrix from_canon_;  // g x k
};

// A subquotient <num> / <den> of an ambient group Z^g / <rel>, with
// <den> contained in <num> + <rel>.  The group is presented on the columns of num.
class Subquotient {
 public:
  Subquotient() = default;
  Subquotient(IntMatrix ambient_relations, IntMatrix numerator, IntMatrix denominator);
  static Subquotient whole(const IntMatrix& ambient_relations);
  static Subquotient of_group(const FinAbGroup& g);

  const FinAbGroup& group() const { return group_; }
  std::size_t ambient_dim() const { return rel_.rows(); }
  const IntMatrix& ambient_relations() const { return rel_; }
  const IntMatrix& numerator() const { return num_; }
  const IntMatrix& denominator() const { return den_; }

  bool contains(const IntVector& x) const;  // x in <num> + <rel>
  IntVector classify(const IntVector& x) const;  // throws if not contained
  bool is_trivial_class(const IntVector& x) const;
  IntVector represent(const IntVector& canon) const;
  // Ambient lifts of the canonical generators, one per column.
  IntMatrix generator_lifts() const;
  // The torsion part, as a subquotient over the same ambient.
  Subquotient torsion() const;

 private:
  IntMatrix rel_, num_, den_;
  FinAbGroup group_;
  LinearSolver solver_;  // on [num | rel]
  IntMatrix lifts_;
};

// Matrix in canonical coordinates of the map induced by an ambient matrix F.
// Throws std::invalid_argument if F does not carry num into num and den into den.
IntMatrix induced_map(const Subquotient& src, const Subquotient& tgt, const IntMatrix& F);
// Matrix in canonical coordinates from images of canonical generators.
IntMatrix map_from_images(const Subquotient& src, const Subquotient& tgt,
                          const std::vector<IntVector>& ambient_images);

// A homomorphism between canonical groups, acting on canonical coordinates.
struct GroupMap {
  FinAbGroup source, target;
  IntMatrix matrix;  // target.num_factors() x source.num_factors()
};

// Verifies the relations of source map to zero in target; throws std::invalid_argument.
GroupMap make_group_map(const FinAbGroup& source, const FinAbGroup& target, IntMatrix matrix);
// Presentation-level map: matrix acts on generators; verified well-defined.
GroupMap make_presented_map(const FinAbGroup& source, const FinAbGroup& target,
                            const IntMatrix& presentation_matrix);
IntVector apply_map(const GroupMap& f, const IntVector& x);
GroupMap compose(const GroupMap& g, const GroupMap& f);  // g o f
GroupMap identity_map(const FinAbGroup& g);
bool is_zero_map(const GroupMap& f);

struct KernelImage {
  FinAbGroup kernel, image, cokernel;
  IntMatrix kernel_lifts;    // source canonical coords, one column per kernel generator
  IntMatrix image_lifts;     // target canonical coords
  IntMatrix cokernel_lifts;  // target canonical coords
};
KernelImage morphism_kernel_image(const GroupMap& f);

// Columns span {x in Z^dim : c x in column-span(t)}.
IntMatrix solution_lattice(const IntMatrix& c, const IntMatrix& t, std::size_t dim);

// Subgroups of a canonical group G given by generator columns (canonical coords).
bool subgroup_contains(const FinAbGroup& G, const IntMatrix& gens, const IntVector& x);
bool same_subgroup(const FinAbGroup& G, const IntMatrix& a, const IntMatrix& b);
FinAbGroup subgroup_group(const FinAbGroup& G, const IntMatrix& gens);
IntMatrix kernel_generators(const GroupMap& f);
IntMatrix image_generators(const GroupMap& f);
bool is_injective(const GroupMap& f);
bool is_surjective(const GroupMap& f);
bool is_isomorphism(const GroupMap& f);
// Inverse of a bijective map; throws if f is not bijective.
GroupMap inverse_map(const GroupMap& f);
// image(in) == kernel(out) inside the middle group.
bool exact_at(const GroupMap& in, const GroupMap& out);

// Hom(A, B) for canonical groups.  An element is stored as a matrix of images
// of A's canonical generators in B's canonical coordinates.
struct HomGroup {
  FinAbGroup source, target, group;
  IntMatrix to_matrix(const IntVector& element) const;  // B.k x A.k
  IntVector from_matrix(const IntMatrix& m) const;
  IntVector evaluate(const IntVector& element, const IntVector& a) const;
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (target idx, source idx)
  IntVector steps;  // generator of slot s sends source gen to steps[s] * target gen
};
HomGroup hom_group(const FinAbGroup& A, const FinAbGroup& B);

// Q/Z values as reduced fractions num/den with 0 <= num < den.
struct QZ {
  Int num = 0, den = 1;
  static QZ make(const Int& num, const Int& den);
  QZ operator+(const QZ& o) const;
  bool operator==(const QZ& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
};

// Hom(A, Q/Z) for finite A.  Characters use coordinates chi_i with
// chi(g_i) = chi_i / a_i for the canonical generators g_i of order a_i.
struct DualGroup {
  FinAbGroup source, group;
  QZ pair(const IntVector& chi, const IntVector& a) const;
};
DualGroup dual_group(const FinAbGroup& A);  // throws on infinite A
// The canonical evaluation map A -> dual(dual(A)).
GroupMap double_dual_map(const FinAbGroup& A);

}  // namespace rif

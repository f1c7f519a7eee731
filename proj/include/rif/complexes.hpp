#pragma once

#include "rif/module.hpp"
#include "rif/tate.hpp"

#include <vector>

namespace rif {

// degree0 --f--> degree1, f equivariant.  The terms are lattices in the usual case; the
// dual model below also feeds finite terms through the same code.
struct LatticeComplex {
  GammaModule degree0, degree1;
  IntMatrix map;  // degree1 gens x degree0 gens
};
void validate_complex(const LatticeComplex& c);

// Total complex over the standard small resolution:
// L^r = C^r(degree0) + C^{r-1}(degree1), d(x, y) = (dx, f x - dy).
IntMatrix hyper_relations(const LatticeComplex& c, std::size_t r);
IntMatrix hyper_differential(const LatticeComplex& c, std::size_t r);  // L^r -> L^{r+1}

struct HyperCohomology {
  int degree = 0;
  std::size_t dim0 = 0, dim1 = 0;  // L^r splits as the first dim0 coordinates then dim1
  Subquotient sq;

  const FinAbGroup& group() const { return sq.group(); }
  IntVector classify(const IntVector& cocycle) const { return sq.classify(cocycle); }
  IntVector represent(const IntVector& cls) const { return sq.represent(cls); }
};
// r in [0, 3]; degree 4 is also accepted for sequences that run one step past 3.
HyperCohomology hypercohomology(const LatticeComplex& c, int r);

// The subgroup ker f and the quotient coker f as modules.
Submodule complex_kernel(const LatticeComplex& c);
GammaModule complex_cokernel(const LatticeComplex& c);

enum class LesKind {
  First,   // H^r(C) -> H^r(degree0) -> H^r(degree1) -> H^{r+1}(C)
  Second,  // H^r(ker f) -> H^r(C) -> H^{r-1}(coker f) -> H^{r+1}(ker f)
};
// Nodes from degree 0 up to hi; interior nodes are checked for exactness, the first for injectivity.
LongExactReport les_check(const LatticeComplex& c, LesKind kind, int hi = 3);

// Terms tensored with (1/n)Z/Z, identified with Z/n by multiplication by n.
LatticeComplex reduce_complex(const LatticeComplex& c, const Int& n);

struct DualModel {
  LatticeComplex base;
  Int modulus = 0;
};
// |Gamma| times the exponent of the torsion of coker f.
Int dual_model_threshold(const LatticeComplex& c);

struct DualModelCohomology {
  HyperCohomology full;  // of reduce_complex(base, n)
  GroupMap integral;     // H^r(base) -> full, reduction of integral classes
  Subquotient reduced;   // full modulo the image of integral
};
// Throws std::invalid_argument unless |Gamma| divides n.
DualModelCohomology dual_model_cohomology(const DualModel& d, int r);

struct StabilizationAudit {
  Int threshold = 0;
  bool above_threshold = false;
  std::vector<bool> orders_equal;  // full groups at n and 2n, per degree
  std::vector<bool> reduced_iso;   // the map induced by (1/n)Z/Z in (1/2n)Z/Z on reduced groups
  bool passed() const;
};
StabilizationAudit stabilization_audit(const DualModel& d, int lo = 0, int hi = 3);

// H^r(Gamma, C) -> H^r(H, C) along the standard resolutions.
GroupMap hyper_restriction(const LatticeComplex& c, const std::vector<std::size_t>& subgroup, int r,
                           const HyperCohomology& global, const HyperCohomology& local);

// Kernel of H^r(Gamma, C) -> prod over the family of H^r(H, C).
struct Ker1Locus {
  HyperCohomology global;
  std::vector<HyperCohomology> locals;
  std::vector<GroupMap> restrictions;
  IntMatrix generators;  // canonical coordinates in global.group()
  FinAbGroup group;
};
Ker1Locus ker1_locus(const LatticeComplex& c, const std::vector<std::vector<std::size_t>>& family, int r);

}  // namespace rif

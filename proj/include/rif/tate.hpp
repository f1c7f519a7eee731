#pragma once

#include "rif/abelian.hpp"
#include "rif/module.hpp"
#include "rif/resolution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rif {

// A computed cohomology group with its cocycle representatives.
// Degrees -1 and 0 (Tate) live in M itself; degree k >= 1 lives in Hom(F_k, M) = M^copies
// for the standard small resolution.
struct CohomologyGroup {
  GammaModule module;
  int degree = 0;
  bool tate = true;
  std::size_t copies = 1;
  Subquotient sq;  // cocycles / coboundaries over the cochain presentation

  const FinAbGroup& group() const { return sq.group(); }
  bool is_cocycle(const IntVector& x) const { return sq.contains(x); }
  IntVector classify(const IntVector& cocycle) const { return sq.classify(cocycle); }
  IntVector represent(const IntVector& cls) const { return sq.represent(cls); }
};

// Tate cohomology, degree in [-1, 4]; degree 4 is exposed for connecting maps out of degree 3.
CohomologyGroup tate_cohomology(const GammaModule& m, int degree);
// Ordinary H^k, k in [0, 4].
CohomologyGroup group_cohomology(const GammaModule& m, int degree);
// Ordinary H^k computed over an arbitrary resolution (k >= 0, k < r.max_degree()).
CohomologyGroup cohomology_via(const Resolution& r, const GammaModule& m, int degree);

struct CohomologyMap {
  CohomologyGroup source, target;
  GroupMap map;
};

// Map on cohomology induced by a module map f : a -> b (checked equivariant).
GroupMap induced_on_cohomology(const CohomologyGroup& src, const CohomologyGroup& tgt, const IntMatrix& f);
CohomologyMap module_map_on_cohomology(const GammaModule& a, const GammaModule& b, const IntMatrix& f,
                                       int degree);
GroupMap restriction_map(const CohomologyGroup& src, const Subgroup& h, const CohomologyGroup& tgt);
CohomologyMap restriction(const GammaModule& m, const Subgroup& h, int degree);
// H^k(Q, m) -> H^k(big, inflated m) along pi : big -> Q, k >= 1.
CohomologyMap inflation(const GammaModule& m, const FiniteGroup& big, const std::vector<std::size_t>& pi,
                        int degree);

// Direct sum of canonical groups, presented on concatenated canonical coordinates.
struct DirectSum {
  FinAbGroup group;
  std::vector<std::size_t> offsets;  // start of each summand in the presentation
  std::vector<FinAbGroup> parts;
  IntVector inject(std::size_t i, const IntVector& x) const;  // canonical coords of the sum
  IntVector component(std::size_t i, const IntVector& x) const;
};
DirectSum direct_sum_of(const std::vector<FinAbGroup>& parts);
// The map into a direct sum with the given components.
GroupMap map_into_sum(const FinAbGroup& source, const DirectSum& sum, const std::vector<GroupMap>& parts);
// The map out of a direct sum with the given components.
GroupMap map_out_of_sum(const DirectSum& sum, const FinAbGroup& target, const std::vector<GroupMap>& parts);

// H^i(Gamma, A[X]) -> (+)_x H^i(Stab x, A), x running over one point per orbit.
struct ShapiroDecomposition {
  CohomologyGroup whole;
  std::vector<std::size_t> points;
  std::vector<CohomologyGroup> parts;
  DirectSum sum;
  GroupMap forward;
  bool bijective = false;
  std::optional<GroupMap> backward;
};
ShapiroDecomposition shapiro_decompose(const GammaSet& x, const GammaModule& a, int degree,
                                       std::optional<std::vector<std::size_t>> points = {});

struct ShortExactSequence {
  GammaModule a, b, c;
  IntMatrix i, p;  // a -> b -> c on presentation coordinates
};
// Throws std::invalid_argument naming the failing condition.
void validate_ses(const ShortExactSequence& s);
// Ĥ^k(C) -> Ĥ^{k+1}(A) by the snake construction on representatives, k in [-1, 3].
GroupMap connecting_map(const ShortExactSequence& s, const CohomologyGroup& hc, const CohomologyGroup& ha_next);

struct SequenceNode {
  std::string name;
  FinAbGroup group;
  bool exact = false;
  bool checked = false;
};
struct LongExactReport {
  std::vector<SequenceNode> nodes;
  std::vector<GroupMap> maps;  // maps[i] : nodes[i] -> nodes[i+1]
  bool all_exact() const;
};
// Ĥ^lo(A) -> Ĥ^lo(B) -> Ĥ^lo(C) -> Ĥ^{lo+1}(A) -> ... -> Ĥ^hi(C) -> Ĥ^{hi+1}(A).
LongExactReport long_exact_sequence(const ShortExactSequence& s, int lo = -1, int hi = 3);

// Čech cochains for the split cover: Gamma-equivariant F on Gamma^n.
// Group cochains: f on Gamma^k, tuples encoded with the first entry most significant.
using CochainTable = std::vector<IntVector>;
std::size_t tuple_count(const FiniteGroup& g, std::size_t k);
std::vector<std::size_t> decode_tuple(const FiniteGroup& g, std::size_t k, std::size_t code);
std::size_t encode_tuple(const FiniteGroup& g, const std::vector<std::size_t>& t);

CochainTable group_differential(const GammaModule& m, const CochainTable& f, std::size_t k);
CochainTable cech_differential(const GammaModule& m, const CochainTable& f, std::size_t n);
// f on Gamma^{n-1} -> F on Gamma^n, F(g1..gn) = g1 f(g1^-1 g2, ..., g_{n-1}^-1 g_n).
CochainTable to_cech(const GammaModule& m, const CochainTable& f, std::size_t n);
// F on Gamma^n -> f(s1..s_{n-1}) = F(e, s1, s1 s2, ...).
CochainTable to_group(const GammaModule& m, const CochainTable& f, std::size_t n);
bool is_equivariant_cech(const GammaModule& m, const CochainTable& f, std::size_t n);
bool tables_equal(const GammaModule& m, const CochainTable& a, const CochainTable& b);

// Inhomogeneous cocycle f(g1..gk) for a cochain on the standard small resolution.
CochainTable inhomogeneous_cocycle(const GammaModule& m, std::size_t k, const IntVector& small_cochain);

}  // namespace rif

#pragma once

#include "rif/module.hpp"
#include "rif/tate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rif {

// A level (E, S_E-dot, n).  The Galois group is the group acting on the places.
struct Level {
  PlaceSystem system;
  bool allow_violations = false;  // negative controls only

  const FiniteGroup& group() const { return system.places.group(); }
  const GammaSet& places() const { return system.places; }
  const Int& modulus() const { return system.modulus; }
};
// Validates the section and, unless allow_violations is set, stabilizer coverage and dotted fixed points.
Level make_level(PlaceSystem system, bool allow_violations = false);

// Inside Z/n[Gamma x S_E], coordinate sigma * |S_E| + w.
struct LevelModules {
  GammaModule ambient;
  Submodule full;    // killed by both augmentations
  Submodule dotted;  // and x[(sigma, w)] = 0 unless sigma^-1 w is dotted
};
LevelModules level_modules(const Level& level);

// 0 -> M_dot -> Z/n[Gamma x S]_0 -> Z/n[S_E]_0 -> 0 with S the orbits and the middle
// subscript meaning sum over S is zero for each sigma.
struct LevelSequence {
  ShortExactSequence ses;
  bool exact = false;
  std::string failure;
};
LevelSequence level_sequence(const Level& level);

// Psi : Hom(A, M_{E,S,n})^Gamma -> Z^-1(Gamma, A^vee[S_E]_0), h_w(a) = H(a)[(e, w)] / n.
struct PsiReport {
  HomGroup hom;                            // Hom(A, M) on canonical groups
  Subquotient fixed, fixed_dotted;         // over canonical coordinates of hom.group
  GammaModule dual_places;                 // A^vee[S_E], coordinate w * k + i
  Subquotient cocycles, cocycles_dotted;   // norm kernel of A^vee[S_E]_0, and its part on the section
  GroupMap psi, inverse, psi_dotted;       // psi_dotted : fixed_dotted -> cocycles_dotted
  CohomologyGroup tate;                    // Tate H^-1(A^vee[S_E]_0)
  GroupMap to_tate;                        // cocycles_dotted -> tate
  bool bijective = false, inverse_verified = false, dotted_onto = false, tate_surjective = false;
};
// Throws std::invalid_argument unless exp(A) divides n.
PsiReport psi_map(const Level& level, const GammaModule& a);
// Psi_m o (M_n -> M_m) == Psi_n on every generator; both levels share places and n | m.
bool psi_compatible(const Level& n_level, const Level& m_level, const GammaModule& a);

// (E, S_E-dot, n) < (K, S'_K-dot, m).
struct LevelMap {
  Level source, target;
  std::vector<std::size_t> pi;                       // Gamma_K -> Gamma_E
  std::vector<std::optional<std::size_t>> restrict;  // S'_K -> S_E, empty off S_K
  std::vector<std::size_t> section;                  // S_E -> S'_K, dotted to dotted
};
void validate_level_map(const LevelMap& f);
LevelMap identity_level_map(const Level& level);
LevelMap compose(const LevelMap& g, const LevelMap& f);  // g o f

// Ambient transition Z/n[Gamma_E x S_E] -> Z/m[Gamma_K x S'_K]; (1/n)Z/Z sits in (1/m)Z/Z as m/n.
IntMatrix transition_matrix(const LevelMap& f);
struct TransitionReport {
  GroupMap map;  // on dotted modules, canonical coordinates
  bool equivariant = false;
};
TransitionReport level_transition(const LevelMap& f);

// Z/n[S_E]_0 -> Z/m[S'_K]_0, [w] -> (m/n) sum over u above w of #Stab(u, Gamma_K/E) [u].
struct CompanionTransition {
  IntMatrix ambient;
  GroupMap map;
  bool coefficients_vanish = false;  // every coefficient is 0 mod m
  bool vanishes = false;
};
CompanionTransition companion_transition(const LevelMap& f);

// Towers over F built from decomposition groups in the big group; point 0 of each block is dotted.
struct TowerPlace {
  std::vector<std::size_t> decomposition;  // in Gamma_K
  bool in_lower = true;                    // place of S rather than only of S'
};
LevelMap make_tower(const FiniteGroup& big, const std::vector<std::size_t>& kernel,
                    const std::vector<TowerPlace>& places, const Int& n, const Int& m,
                    bool allow_violations = false);

// The same places viewed over a larger group through pi : big -> Gamma, at modulus m.
LevelMap inflate_level(const Level& level, const FiniteGroup& big, const std::vector<std::size_t>& pi, const Int& m);

// loc_v : M_dot -> Z/n[Gamma_v]_0, H -> sum over sigma in Gamma_v of c_{sigma, v}[sigma].
struct Localization {
  Subgroup decomposition;
  Submodule target;  // inside Z/n[Gamma_v], coordinate = index in decomposition.embed
  IntMatrix ambient;
  GroupMap map;
  bool equivariant = false;
};
Localization localize_level(const Level& level, const DecompositionData& d);
// loc at s(v) after the transition equals the local transition after loc at v, on generators.
bool localization_square_commutes(const LevelMap& f, std::size_t dotted_place);

// Y inside Ybar of finite index, both Gamma-stable; columns of y_basis are in Ybar coordinates.
struct IsogenyPair {
  GammaModule ybar;
  IntMatrix y_basis;
};
void validate_pair(const IsogenyPair& p);
GammaModule pair_quotient(const IsogenyPair& p);  // A^vee = Ybar / Y
IsogenyPair inflate_pair(const IsogenyPair& p, const FiniteGroup& big, const std::vector<std::size_t>& pi);

// Ybar[S_E, S-dot]_0^N / I Y[S_E]_0 over Z^{r |S_E|}, coordinate w * r + i.
struct YbarGroup {
  std::size_t rank = 0;
  Subquotient group;
  Subquotient whole;   // Ybar[S_E, S-dot]_0 / I Y[S_E]_0
  Subquotient y_part;  // Y[S_E]_0^N / I Y[S_E]_0
  IntMatrix dotted_support;  // generators of Ybar[S-dot]_0
  IntMatrix iy;              // generators of I Y[S_E]_0
  LinearSolver dotted_solver;  // on [dotted_support | iy]
  bool torsion_certified = false;  // group == torsion of whole
  bool dotted_certified = false;   // every class of group has a representative on the section
  // Representative supported on the section of the class with canonical coordinates cls.
  IntVector dotted_representative(const IntVector& cls) const;
};
YbarGroup ybar_group(const IsogenyPair& p, const Level& level);
// 0 -> y_part -> group -> A^vee[S_E] is exact at the middle.
bool ybar_sequence_exact(const IsogenyPair& p, const Level& level, const YbarGroup& g);

// s_! on ambient vectors: c_w moves to s(w).
IntMatrix shriek_matrix(const LevelMap& f, std::size_t rank, const std::vector<std::size_t>& section);
// All sections s : S_E -> S'_K over the identity with s(dotted) dotted.
std::vector<std::vector<std::size_t>> admissible_sections(const LevelMap& f);
struct ShriekReport {
  YbarGroup lower, upper;
  GroupMap map;
  std::size_t sections_checked = 0;
  bool independent = false;
};
// p is over the lower group; the upper level uses its inflation.
ShriekReport shriek_map(const IsogenyPair& p, const LevelMap& f, std::size_t audit_limit = 4096);

// Two consecutive shriek maps that are both isomorphisms.
bool tower_stabilized(const ShriekReport& first, const ShriekReport& second);

// Ybar^{N_v} / I_v Y, the torsion of Ybar / I_v Y.
struct LocalGroup {
  std::vector<std::size_t> stabilizer;
  Subquotient group;
};
LocalGroup local_group(const IsogenyPair& p, const std::vector<std::size_t>& stabilizer);
// l_v on ambient vectors: f -> sum over right cosets Gamma_v t of t c_{t^-1 v}.
IntMatrix lv_matrix(const IsogenyPair& p, const GammaSet& places, const DecompositionData& d);
struct LvReport {
  LocalGroup local;
  GroupMap map;
  std::size_t transversals_checked = 0;
  bool independent = false;
};
LvReport l_v(const IsogenyPair& p, const Level& level, const YbarGroup& g, const DecompositionData& d,
             bool audit = true);

// (+)_v (Ybar / I_v Y)[tor] -> (Ybar / I Y)[tor] over one dotted place per orbit.
struct SigmaReport {
  FinAbGroup global, locals, target;
  bool composite_zero = false;
  bool exact = false;       // image of the global group == kernel of Sigma, as subgroups
  bool enumerated = false;  // confirmed elementwise
  bool out_of_budget = false;
  Int kernel_order = 0, image_order = 0;
  GroupMap localization, sigma;  // global -> locals -> target
};
SigmaReport sigma_exactness(const IsogenyPair& p, const Level& level, const Int& budget = 512);

// (Ybar / I Y)[tor], its dual, and left nondegeneracy of the pairing against characters of Ybar
// whose restriction to Y is Gamma-invariant.
struct ComponentGroup {
  Subquotient quotient;  // Ybar / I Y
  FinAbGroup torsion;
  DualGroup dual;
  bool left_nondegenerate = false;
};
ComponentGroup component_group(const IsogenyPair& p, const Int& budget = 4096);

}  // namespace rif

#pragma once

// Fixed-seed instance families shared by the acceptance suite and the scenario generator.

#include "rif/complexes.hpp"
#include "rif/rigid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rif {

std::vector<std::size_t> whole_group(const FiniteGroup& g);

// Disjoint union of coset spaces G/H; the coset H itself is the dotted place of each block.
PlaceSystem blocks_system(const FiniteGroup& g, const std::vector<std::vector<std::size_t>>& subgroups, const Int& n);
Level blocks_level(const FiniteGroup& g, const std::vector<std::vector<std::size_t>>& subgroups, const Int& n,
                   bool allow_violations = false);

// Y = k Ybar.
IsogenyPair scaled_pair(const GammaModule& ybar, long long k);

LatticeComplex scaled_complex(const GammaModule& t, long long k);
// Z[Gamma] -> Z by augmentation.
LatticeComplex augmentation_complex(const FiniteGroup& g);

struct PsiInstance {
  std::string name;
  Level level;
  GammaModule a;
};
// |Gamma| <= 8, |S_E| <= 6, exp(A) | n <= 8, stabilizers are covered and every element fixes a dotted place.
std::vector<PsiInstance> psi_corpus(std::uint32_t seed);

struct PairInstance {
  std::string name;
  IsogenyPair pair;
  Level level;
};
std::vector<PairInstance> pair_corpus();

// Two-level towers; each target is over a group with a C2 factor to spare for a third level.
std::vector<LevelMap> tower_corpus();
// The next level up: the same places over target group x C2 at twice the modulus.
LevelMap tower_extension(const LevelMap& f);

struct ComplexInstance {
  std::string name;
  LatticeComplex complex;
};
// Over C2, C3, C4, C2xC2 and S3.
std::vector<ComplexInstance> complex_corpus(std::uint32_t seed);
// f square of full rank.
bool is_isogeny(const LatticeComplex& c);

}  // namespace rif

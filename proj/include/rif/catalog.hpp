#pragma once

#include "rif/module.hpp"

#include <random>
#include <string>
#include <vector>

namespace rif {

// "1", "C<n>", "S3", "D4", "C2xC2" and products "AxB" of these.
FiniteGroup named_group(const std::string& name);

// Z on which elements outside an index-2 subgroup act by -1.
GammaModule sign_lattice(const FiniteGroup& g, const std::vector<std::size_t>& kernel);
// Z[Gamma] with left multiplication.
GammaModule regular_lattice(const FiniteGroup& g);
// Rank-2 faithful lattice of C_n for n in {3, 4, 6}; generator is element 1.
GammaModule rotation_lattice(const FiniteGroup& cyclic);
// Sum-zero part of Z^3 under S3 permuting coordinates.
GammaModule s3_standard_lattice(const FiniteGroup& s3);
// L / n L.
GammaModule reduce_mod(const GammaModule& lattice, const Int& n);

// Lattices available for a group, small rank, for corpus generation.
std::vector<GammaModule> lattice_catalog(const FiniteGroup& g);
// Index-2 subgroups.
std::vector<std::vector<std::size_t>> index_two_subgroups(const FiniteGroup& g);

// Equivariant maps L -> L' found by averaging random integer matrices over the group.
IntMatrix random_equivariant_map(std::mt19937& rng, const GammaModule& src, const GammaModule& tgt, int bound);

}  // namespace rif

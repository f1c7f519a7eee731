#pragma once

#include "rif/group.hpp"
#include "rif/matrix.hpp"
#include "rif/module.hpp"
#include "rif/smith.hpp"

#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace rif {

// Sparse element of a free Z[Gamma]-module: (basis index j, group element g) -> coefficient of g e_j.
using Chain = std::map<std::pair<std::size_t, std::size_t>, Int>;

Chain act_chain(const FiniteGroup& g, std::size_t x, const Chain& c);
void add_to(Chain& acc, const Chain& c, const Int& k = 1);

// A free resolution F_k -> ... -> F_0 -> Z of the trivial module, F_0 = Z[Gamma].
class Resolution {
 public:
  explicit Resolution(FiniteGroup gamma) : gamma_(std::move(gamma)) {}
  virtual ~Resolution() = default;

  const FiniteGroup& gamma() const { return gamma_; }
  virtual std::size_t max_degree() const = 0;
  virtual std::size_t rank(std::size_t k) const = 0;
  // Boundary of the k-th basis element j (k >= 1), as an element of F_{k-1}.
  virtual Chain boundary(std::size_t k, std::size_t j) const = 0;
  // x in F_k with d x = z, for z a cycle of F_{k-1}; for k = 0, z is an integer stored at (0, e).
  virtual Chain lift(std::size_t k, const Chain& z) const = 0;

  Chain apply_boundary(std::size_t k, const Chain& c) const;

 private:
  FiniteGroup gamma_;
};

// Resolution found by linear algebra: Z[Gamma]-generators of each cycle module are chosen
// greedily among sparse kernel vectors.
class SmallResolution : public Resolution {
 public:
  SmallResolution(const FiniteGroup& gamma, std::size_t max_degree);
  std::size_t max_degree() const override { return boundaries_.size(); }
  std::size_t rank(std::size_t k) const override { return ranks_[k]; }
  Chain boundary(std::size_t k, std::size_t j) const override { return boundaries_[k - 1][j]; }
  Chain lift(std::size_t k, const Chain& z) const override;
  // Dense Z-matrix of d_k, coordinate j * |Gamma| + g.
  const IntMatrix& boundary_matrix(std::size_t k) const { return dense_[k - 1]; }

 private:
  std::vector<std::size_t> ranks_;
  std::vector<std::vector<Chain>> boundaries_;
  std::vector<IntMatrix> dense_;
  std::vector<LinearSolver> solvers_;
};

// Standard (unnormalized) bar resolution; basis of F_k is Gamma^k, first entry most significant.
class BarResolution : public Resolution {
 public:
  BarResolution(const FiniteGroup& gamma, std::size_t max_degree);
  std::size_t max_degree() const override { return max_degree_; }
  std::size_t rank(std::size_t k) const override;
  Chain boundary(std::size_t k, std::size_t j) const override;
  Chain lift(std::size_t k, const Chain& z) const override;

  std::vector<std::size_t> decode(std::size_t k, std::size_t j) const;
  std::size_t encode(const std::vector<std::size_t>& t) const;

 private:
  std::size_t max_degree_;
};

// Shared small resolution of degree 5 per group table; thread-safe.
std::shared_ptr<const SmallResolution> standard_resolution(const FiniteGroup& g);

// Lift of rho : Gamma' -> Gamma to a chain map alpha : F' -> F; alpha[k][j] = alpha(e'_j).
std::vector<std::vector<Chain>> lift_chain_map(const Resolution& src, const Resolution& tgt,
                                               const std::vector<std::size_t>& rho, std::size_t max_degree);

// Hom_Gamma(F_k, M) = M^{rank k}, block j holding the value on e_j.
IntMatrix cochain_relations(const Resolution& r, const GammaModule& m, std::size_t k);
IntMatrix cochain_differential(const Resolution& r, const GammaModule& m, std::size_t k);
// phi -> phi o alpha_k, from C^k(Gamma, M) to C^k(Gamma', rho^* M).
// m is a module over the target group; tgt_rank is the rank of the target F_k.
IntMatrix cochain_pullback(const std::vector<Chain>& alpha_k, std::size_t tgt_rank, const GammaModule& m);

}  // namespace rif

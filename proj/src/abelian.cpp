#include "rif/abelian.hpp"

#include <sstream>
#include <stdexcept>

namespace rif {

namespace {

bool is_canonical_factor_list(const IntVector& f) {
  bool seen_free = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || f[i] == 1) return false;
    if (f[i] == 0) {
      seen_free = true;
      continue;
    }
    if (seen_free) return false;
    if (i > 0 && f[i] % f[i - 1] != 0) return false;
  }
  return true;
}

IntMatrix diag_relations(const FinAbGroup& g) { return IntMatrix::diagonal(g.factors()); }

}  // namespace

FinAbGroup::FinAbGroup() : relations_(0, 0), to_canon_(0, 0), from_canon_(0, 0) {}

FinAbGroup FinAbGroup::cokernel(const IntMatrix& relations) {
  FinAbGroup g;
  g.relations_ = relations;
  std::size_t n = relations.rows();
  if (relations.cols() == 0) {
    g.factors_ = IntVector(n, Int(0));
    g.to_canon_ = IntMatrix::identity(n);
    g.from_canon_ = IntMatrix::identity(n);
    return g;
  }
  SmithForm f = smith_normal_form(relations);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < f.rank) {
      if (f.D(i, i) == 1) continue;
      g.factors_.push_back(f.D(i, i));
    } else {
      g.factors_.push_back(0);
    }
    idx.push_back(i);
  }
  g.to_canon_ = f.U.select_rows(idx);
  g.from_canon_ = f.U_inv.select_columns(idx);
  if (idx.empty()) {
    g.to_canon_ = IntMatrix(0, n);
    g.from_canon_ = IntMatrix(n, 0);
  }
  return g;
}

FinAbGroup FinAbGroup::standard(const IntVector& factors) {
  if (is_canonical_factor_list(factors)) {
    FinAbGroup g;
    std::size_t k = factors.size();
    IntMatrix rel(k, 0);
    std::vector<IntVector> cols;
    for (std::size_t i = 0; i < k; ++i)
      if (factors[i] != 0) {
        IntVector c(k, Int(0));
        c[i] = factors[i];
        cols.push_back(c);
      }
    g.relations_ = cols.empty() ? IntMatrix(k, 0) : IntMatrix::from_columns(cols, k);
    g.factors_ = factors;
    g.to_canon_ = IntMatrix::identity(k);
    g.from_canon_ = IntMatrix::identity(k);
    return g;
  }
  return cokernel(IntMatrix::diagonal(factors));
}

FinAbGroup FinAbGroup::free(std::size_t rank) { return cokernel(IntMatrix(rank, 0)); }

std::size_t FinAbGroup::rank() const {
  std::size_t r = 0;
  for (const auto& f : factors_)
    if (f == 0) ++r;
  return r;
}

bool FinAbGroup::is_finite() const { return rank() == 0; }

Int FinAbGroup::order() const {
  if (!is_finite()) throw std::domain_error("order of an infinite group");
  Int o = 1;
  for (const auto& f : factors_) o *= f;
  return o;
}

Int FinAbGroup::exponent() const {
  if (!is_finite()) return 0;
  return factors_.empty() ? Int(1) : factors_.back();
}

IntVector FinAbGroup::torsion_factors() const {
  IntVector t;
  for (const auto& f : factors_)
    if (f != 0) t.push_back(f);
  return t;
}

IntVector FinAbGroup::reduce(const IntVector& c) const {
  if (c.size() != factors_.size()) throw std::invalid_argument("canonical vector length mismatch");
  IntVector r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = mod(c[i], factors_[i]);
  return r;
}

IntVector FinAbGroup::canonical(const IntVector& x) const {
  if (x.size() != num_generators())
    throw std::invalid_argument("element length " + std::to_string(x.size()) + " != " +
                                std::to_string(num_generators()) + " generators");
  if (factors_.empty()) return {};
  return reduce(to_canon_ * x);
}

IntVector FinAbGroup::lift(const IntVector& c) const {
  if (c.size() != factors_.size()) throw std::invalid_argument("canonical vector length mismatch");
  if (num_generators() == 0) return {};
  if (factors_.empty()) return IntVector(num_generators(), Int(0));
  return from_canon_ * c;
}

bool FinAbGroup::is_zero(const IntVector& x) const { return rif::is_zero(canonical(x)); }

bool FinAbGroup::equal(const IntVector& x, const IntVector& y) const {
  IntVector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return is_zero(d);
}

std::string FinAbGroup::describe() const {
  if (factors_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " + ";
    if (factors_[i] == 0)
      os << "Z";
    else
      os << "Z/" << factors_[i];
  }
  return os.str();
}

void FinAbGroup::for_each_element(const std::function<bool(const IntVector&)>& f) const {
  if (!is_finite()) throw std::domain_error("cannot enumerate an infinite group");
  IntVector c(factors_.size(), Int(0));
  for (;;) {
    if (!f(c)) return;
    std::size_t i = 0;
    for (; i < c.size(); ++i) {
      c[i] += 1;
      if (c[i] < factors_[i]) break;
      c[i] = 0;
    }
    if (i == c.size()) return;
  }
}

std::vector<IntVector> FinAbGroup::elements() const {
  std::vector<IntVector> out;
  for_each_element([&](const IntVector& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------

Subquotient::Subquotient(IntMatrix ambient_relations, IntMatrix numerator, IntMatrix denominator)
    : rel_(std::move(ambient_relations)), num_(std::move(numerator)), den_(std::move(denominator)) {
  const std::size_t g = rel_.rows();
  if (num_.rows() != g && !(num_.cols() == 0)) throw std::invalid_argument("numerator size mismatch");
  if (num_.cols() == 0) num_ = IntMatrix(g, 0);
  if (den_.cols() == 0) den_ = IntMatrix(g, 0);
  if (den_.rows() != g) throw std::invalid_argument("denominator size mismatch");
  solver_ = LinearSolver(IntMatrix::hcat(num_, rel_));
  const std::size_t k = num_.cols();
  IntMatrix all = IntMatrix::hcat(IntMatrix::hcat(num_, den_), rel_);
  IntMatrix relmat(k, 0);
  if (all.cols() > 0 && k > 0) {
    IntMatrix K = kernel_basis(all);
    relmat = K.block(0, 0, k, K.cols());
  }
  for (std::size_t j = 0; j < den_.cols(); ++j)
    if (!solver_.solvable(den_.column(j)))
      throw std::invalid_argument("subquotient: denominator not contained in numerator");
  group_ = FinAbGroup::cokernel(relmat);
  lifts_ = k ? num_ * group_.from_canonical() : IntMatrix(g, 0);
  if (group_.num_factors() == 0) lifts_ = IntMatrix(g, 0);
}

Subquotient Subquotient::whole(const IntMatrix& ambient_relations) {
  return Subquotient(ambient_relations, IntMatrix::identity(ambient_relations.rows()),
                     IntMatrix(ambient_relations.rows(), 0));
}

Subquotient Subquotient::of_group(const FinAbGroup& g) {
  return Subquotient(diag_relations(g), IntMatrix::identity(g.num_factors()),
                     IntMatrix(g.num_factors(), 0));
}

bool Subquotient::contains(const IntVector& x) const { return solver_.solvable(x); }

IntVector Subquotient::classify(const IntVector& x) const {
  auto s = solver_.solve(x);
  if (!s) throw std::invalid_argument("element outside the numerator subgroup");
  IntVector c(s->begin(), s->begin() + static_cast<std::ptrdiff_t>(num_.cols()));
  return group_.canonical(c);
}

bool Subquotient::is_trivial_class(const IntVector& x) const { return rif::is_zero(classify(x)); }

IntVector Subquotient::represent(const IntVector& canon) const {
  if (canon.size() != group_.num_factors()) throw std::invalid_argument("class length mismatch");
  if (canon.empty()) return IntVector(ambient_dim(), Int(0));
  return lifts_ * canon;
}

IntMatrix Subquotient::generator_lifts() const { return lifts_; }

Subquotient Subquotient::torsion() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < group_.num_factors(); ++i)
    if (group_.factors()[i] != 0) idx.push_back(i);
  IntMatrix tor = idx.empty() ? IntMatrix(ambient_dim(), 0) : lifts_.select_columns(idx);
  return Subquotient(rel_, IntMatrix::hcat(tor, den_), den_);
}

IntMatrix induced_map(const Subquotient& src, const Subquotient& tgt, const IntMatrix& F) {
  if (F.cols() != src.ambient_dim() || F.rows() != tgt.ambient_dim())
    throw std::invalid_argument("induced_map: ambient dimension mismatch");
  for (std::size_t j = 0; j < src.numerator().cols(); ++j)
    if (!tgt.contains(F * src.numerator().column(j)))
      throw std::invalid_argument("induced_map: numerator not carried into numerator");
  for (std::size_t j = 0; j < src.denominator().cols(); ++j)
    if (!tgt.is_trivial_class(F * src.denominator().column(j)))
      throw std::invalid_argument("induced_map: denominator not carried into denominator");
  for (std::size_t j = 0; j < src.ambient_relations().cols(); ++j)
    if (!tgt.is_trivial_class(F * src.ambient_relations().column(j)))
      throw std::invalid_argument("induced_map: ambient relations not preserved");
  IntMatrix L = src.generator_lifts();
  IntMatrix M(tgt.group().num_factors(), src.group().num_factors());
  for (std::size_t j = 0; j < L.cols(); ++j) M.set_column(j, tgt.classify(F * L.column(j)));
  return M;
}

IntMatrix map_from_images(const Subquotient& src, const Subquotient& tgt,
                          const std::vector<IntVector>& ambient_images) {
  if (ambient_images.size() != src.group().num_factors())
    throw std::invalid_argument("map_from_images: wrong number of images");
  IntMatrix M(tgt.group().num_factors(), src.group().num_factors());
  for (std::size_t j = 0; j < ambient_images.size(); ++j) {
    IntVector c = tgt.classify(ambient_images[j]);
    const Int& d = src.group().factors()[j];
    if (d != 0) {
      IntVector dc(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) dc[i] = d * c[i];
      if (!rif::is_zero(tgt.group().reduce(dc)))
        throw std::invalid_argument("map_from_images: generator order not respected");
    }
    M.set_column(j, c);
  }
  return M;
}

// ---------------------------------------------------------------------------

GroupMap make_group_map(const FinAbGroup& source, const FinAbGroup& target, IntMatrix matrix) {
  const std::size_t ks = source.num_factors(), kt = target.num_factors();
  if (matrix.rows() != kt || matrix.cols() != ks) {
    if (!(ks == 0 || kt == 0)) throw std::invalid_argument("group map: matrix shape mismatch");
    matrix = IntMatrix(kt, ks);
  }
  for (std::size_t j = 0; j < ks; ++j) {
    IntVector c = matrix.column(j);
    c = target.reduce(c);
    const Int& d = source.factors()[j];
    if (d != 0) {
      IntVector dc(kt);
      for (std::size_t i = 0; i < kt; ++i) dc[i] = d * c[i];
      if (!rif::is_zero(target.reduce(dc)))
        throw std::invalid_argument("ill-defined homomorphism: generator " + std::to_string(j) +
                                    " of order " + to_string(d) + " maps to an element of larger order");
    }
    matrix.set_column(j, c);
  }
  return {source, target, std::move(matrix)};
}

GroupMap make_presented_map(const FinAbGroup& source, const FinAbGroup& target,
                            const IntMatrix& P) {
  if (P.rows() != target.num_generators() || P.cols() != source.num_generators())
    throw std::invalid_argument("presented map: matrix shape mismatch");
  const IntMatrix& R = source.relations();
  for (std::size_t j = 0; j < R.cols(); ++j)
    if (!target.is_zero(P * R.column(j)))
      throw std::invalid_argument("ill-defined homomorphism: relation " + std::to_string(j) +
                                  " of the source does not map into the target relations");
  IntMatrix M(target.num_factors(), source.num_factors());
  for (std::size_t j = 0; j < source.num_factors(); ++j)
    M.set_column(j, target.canonical(P * source.from_canonical().column(j)));
  return make_group_map(source, target, std::move(M));
}

IntVector apply_map(const GroupMap& f, const IntVector& x) {
  if (f.target.num_factors() == 0) return {};
  if (f.source.num_factors() == 0) return IntVector(f.target.num_factors(), Int(0));
  return f.target.reduce(f.matrix * x);
}

GroupMap compose(const GroupMap& g, const GroupMap& f) {
  if (!f.target.isomorphic(g.source)) throw std::invalid_argument("compose: groups do not match");
  IntMatrix m(g.target.num_factors(), f.source.num_factors());
  if (g.target.num_factors() && f.source.num_factors() && g.source.num_factors())
    m = g.matrix * f.matrix;
  return make_group_map(f.source, g.target, std::move(m));
}

GroupMap identity_map(const FinAbGroup& g) {
  return make_group_map(g, g, IntMatrix::identity(g.num_factors()));
}

bool is_zero_map(const GroupMap& f) {
  for (std::size_t j = 0; j < f.source.num_factors(); ++j)
    if (!rif::is_zero(f.target.reduce(f.matrix.column(j)))) return false;
  return true;
}

IntMatrix kernel_generators(const GroupMap& f) {
  const std::size_t ks = f.source.num_factors();
  if (ks == 0) return IntMatrix(0, 0);
  IntMatrix all = IntMatrix::hcat(f.matrix, diag_relations(f.target));
  if (all.rows() == 0) return IntMatrix::identity(ks);
  IntMatrix K = kernel_basis(all);
  return K.block(0, 0, ks, K.cols());
}

IntMatrix image_generators(const GroupMap& f) { return f.matrix; }

FinAbGroup subgroup_group(const FinAbGroup& G, const IntMatrix& gens) {
  return Subquotient(diag_relations(G), gens, IntMatrix(G.num_factors(), 0)).group();
}

bool subgroup_contains(const FinAbGroup& G, const IntMatrix& gens, const IntVector& x) {
  if (G.num_factors() == 0) return true;
  IntMatrix g = gens.cols() ? gens : IntMatrix(G.num_factors(), 0);
  LinearSolver s(IntMatrix::hcat(g, diag_relations(G)));
  return s.solvable(x);
}

bool same_subgroup(const FinAbGroup& G, const IntMatrix& a, const IntMatrix& b) {
  if (G.num_factors() == 0) return true;
  IntMatrix A = a.cols() ? a : IntMatrix(G.num_factors(), 0);
  IntMatrix B = b.cols() ? b : IntMatrix(G.num_factors(), 0);
  LinearSolver sa(IntMatrix::hcat(A, diag_relations(G)));
  LinearSolver sb(IntMatrix::hcat(B, diag_relations(G)));
  for (std::size_t j = 0; j < A.cols(); ++j)
    if (!sb.solvable(A.column(j))) return false;
  for (std::size_t j = 0; j < B.cols(); ++j)
    if (!sa.solvable(B.column(j))) return false;
  return true;
}

KernelImage morphism_kernel_image(const GroupMap& f) {
  KernelImage r;
  const std::size_t ks = f.source.num_factors(), kt = f.target.num_factors();
  Subquotient ker(diag_relations(f.source), ks ? kernel_generators(f) : IntMatrix(0, 0),
                  IntMatrix(ks, 0));
  r.kernel = ker.group();
  r.kernel_lifts = ker.generator_lifts();
  IntMatrix img = (ks && kt) ? f.matrix : IntMatrix(kt, 0);
  Subquotient im(diag_relations(f.target), img, IntMatrix(kt, 0));
  r.image = im.group();
  r.image_lifts = im.generator_lifts();
  Subquotient cok(diag_relations(f.target), IntMatrix::identity(kt), img);
  r.cokernel = cok.group();
  r.cokernel_lifts = cok.generator_lifts();
  return r;
}

bool is_injective(const GroupMap& f) {
  if (f.source.num_factors() == 0) return true;
  return morphism_kernel_image(f).kernel.is_trivial();
}

bool is_surjective(const GroupMap& f) {
  if (f.target.num_factors() == 0) return true;
  IntMatrix img = f.source.num_factors() ? f.matrix : IntMatrix(f.target.num_factors(), 0);
  return same_subgroup(f.target, img, IntMatrix::identity(f.target.num_factors()));
}

bool is_isomorphism(const GroupMap& f) { return is_injective(f) && is_surjective(f); }

GroupMap inverse_map(const GroupMap& f) {
  if (!is_isomorphism(f)) throw std::invalid_argument("inverse of a non-bijective map");
  const std::size_t ks = f.source.num_factors(), kt = f.target.num_factors();
  IntMatrix inv(ks, kt);
  if (ks && kt) {
    LinearSolver s(IntMatrix::hcat(f.matrix, diag_relations(f.target)));
    for (std::size_t j = 0; j < kt; ++j) {
      auto x = s.solve(unit(kt, j));
      IntVector c(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(ks));
      inv.set_column(j, f.source.reduce(c));
    }
  }
  return make_group_map(f.target, f.source, std::move(inv));
}

bool exact_at(const GroupMap& in, const GroupMap& out) {
  if (!in.target.isomorphic(out.source)) throw std::invalid_argument("exact_at: middle groups differ");
  const FinAbGroup& mid = in.target;
  if (mid.num_factors() == 0) return true;
  IntMatrix img = in.source.num_factors() ? in.matrix : IntMatrix(mid.num_factors(), 0);
  IntMatrix ker = kernel_generators(out);
  return same_subgroup(mid, img, ker);
}

// ---------------------------------------------------------------------------

HomGroup hom_group(const FinAbGroup& A, const FinAbGroup& B) {
  HomGroup h;
  h.source = A;
  h.target = B;
  IntVector orders;
  for (std::size_t i = 0; i < A.num_factors(); ++i)
    for (std::size_t j = 0; j < B.num_factors(); ++j) {
      const Int& a = A.factors()[i];
      const Int& b = B.factors()[j];
      if (a != 0 && b == 0) continue;
      h.slots.push_back({j, i});
      if (a == 0) {
        h.steps.push_back(1);
        orders.push_back(b);
      } else {
        Int g = gcd(a, b);
        h.steps.push_back(b / g);
        orders.push_back(g);
      }
    }
  h.group = FinAbGroup::cokernel(IntMatrix::diagonal(orders));
  return h;
}

IntMatrix HomGroup::to_matrix(const IntVector& element) const {
  IntMatrix m(target.num_factors(), source.num_factors());
  IntVector s = group.lift(element);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    auto [j, i] = slots[k];
    m(j, i) = mod(s[k] * steps[k], target.factors()[j]);
  }
  return m;
}

IntVector HomGroup::from_matrix(const IntMatrix& m) const {
  IntVector s(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    auto [j, i] = slots[k];
    Int v = mod(m(j, i), target.factors()[j]);
    if (v % steps[k] != 0) throw std::invalid_argument("matrix is not a homomorphism");
    s[k] = v / steps[k];
  }
  for (std::size_t i = 0; i < source.num_factors(); ++i)
    for (std::size_t j = 0; j < target.num_factors(); ++j)
      if (source.factors()[i] != 0 && target.factors()[j] == 0 && m(j, i) != 0)
        throw std::invalid_argument("matrix is not a homomorphism");
  return group.canonical(s);
}

IntVector HomGroup::evaluate(const IntVector& element, const IntVector& a) const {
  return target.reduce(to_matrix(element) * a);
}

QZ QZ::make(const Int& num, const Int& den) {
  if (den <= 0) throw std::invalid_argument("Q/Z denominator must be positive");
  Int n = mod(num, den);
  Int g = gcd(n, den);
  if (g == 0) g = den;
  return {n / g, den / g};
}

QZ QZ::operator+(const QZ& o) const { return make(num * o.den + o.num * den, den * o.den); }

QZ DualGroup::pair(const IntVector& chi, const IntVector& a) const {
  QZ s;
  const IntVector& f = source.factors();
  for (std::size_t i = 0; i < f.size(); ++i) s = s + QZ::make(chi[i] * a[i], f[i]);
  return s;
}

DualGroup dual_group(const FinAbGroup& A) {
  if (!A.is_finite()) throw std::domain_error("dual of an infinite group");
  DualGroup d;
  d.source = FinAbGroup::standard(A.factors());
  d.group = FinAbGroup::standard(A.factors());
  return d;
}

GroupMap double_dual_map(const FinAbGroup& A) {
  DualGroup D = dual_group(A);
  DualGroup DD = dual_group(D.group);
  const std::size_t k = A.num_factors();
  IntMatrix M(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    IntVector a = unit(k, j);
    for (std::size_t i = 0; i < k; ++i) {
      QZ q = D.pair(unit(k, i), a);
      const Int& f = DD.source.factors()[i];
      Int scaled = q.num * f;
      if (scaled % q.den != 0) throw std::logic_error("evaluation value outside (1/f)Z/Z");
      M(i, j) = scaled / q.den;
    }
  }
  return make_group_map(FinAbGroup::standard(A.factors()), DD.group, std::move(M));
}

IntMatrix solution_lattice(const IntMatrix& c, const IntMatrix& t, std::size_t dim) {
  if (c.rows() == 0) return IntMatrix::identity(dim);
  IntMatrix all = IntMatrix::hcat(c, t.cols() ? t : IntMatrix(c.rows(), 0));
  IntMatrix k = kernel_basis(all);
  return k.block(0, 0, dim, k.cols());
}

}  // namespace rif

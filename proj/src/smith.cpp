#include "rif/smith.hpp"

#include <stdexcept>

namespace rif {

namespace {

struct Reducer {
  IntMatrix D, U, Ui, V;
  bool track_rows;
  std::size_t m, n;

  Reducer(const IntMatrix& A, bool track_rows_)
      : D(A), track_rows(track_rows_), m(A.rows()), n(A.cols()) {
    if (track_rows) {
      U = IntMatrix::identity(m);
      Ui = IntMatrix::identity(m);
    }
    V = IntMatrix::identity(n);
  }

  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    D.swap_rows(i, j);
    if (track_rows) {
      U.swap_rows(i, j);
      Ui.swap_cols(i, j);
    }
  }
  void row_add(std::size_t dst, std::size_t src, const Int& k) {
    if (k == 0) return;
    D.add_row(dst, src, k);
    if (track_rows) {
      U.add_row(dst, src, k);
      Ui.add_col(src, dst, -k);
    }
  }
  void row_neg(std::size_t i) {
    D.negate_row(i);
    if (track_rows) {
      U.negate_row(i);
      Ui.negate_col(i);
    }
  }
  // rows (i, j) <- (p ri + q rj, r ri + s rj), ps - qr = 1
  void row_combine(std::size_t i, std::size_t j, const Int& p, const Int& q, const Int& r,
                   const Int& s) {
    D.combine_rows(i, j, p, q, r, s);
    if (track_rows) {
      U.combine_rows(i, j, p, q, r, s);
      Ui.combine_cols(i, j, s, -r, -q, p);
    }
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    D.swap_cols(i, j);
    V.swap_cols(i, j);
  }
  void col_add(std::size_t dst, std::size_t src, const Int& k) {
    if (k == 0) return;
    D.add_col(dst, src, k);
    V.add_col(dst, src, k);
  }
  void col_combine(std::size_t i, std::size_t j, const Int& p, const Int& q, const Int& r,
                   const Int& s) {
    D.combine_cols(i, j, p, q, r, s);
    V.combine_cols(i, j, p, q, r, s);
  }

  bool find_min(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const Int& a = D(i, j);
        if (a == 0) continue;
        Int aa = abs(a);
        if (!found || aa < best) {
          best = aa;
          pi = i;
          pj = j;
          found = true;
          if (best == 1) return true;
        }
      }
    return found;
  }

  bool find_first(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    for (std::size_t j = t; j < n; ++j)
      for (std::size_t i = t; i < m; ++i)
        if (D(i, j) != 0) {
          pi = i;
          pj = j;
          return true;
        }
    return false;
  }

  // Returns true if row t and column t are clear apart from the pivot.
  bool clear_min_pivot(std::size_t t) {
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int q = D(i, t) / D(t, t);
        row_add(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int q = D(t, j) / D(t, t);
        col_add(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (clean) return true;
      // Move the smallest remainder in row/column t into the pivot slot.
      std::size_t bi = t, bj = t;
      Int best = abs(D(t, t));
      for (std::size_t i = t + 1; i < m; ++i)
        if (D(i, t) != 0 && abs(D(i, t)) < best) {
          best = abs(D(i, t));
          bi = i;
          bj = t;
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (D(t, j) != 0 && abs(D(t, j)) < best) {
          best = abs(D(t, j));
          bi = t;
          bj = j;
        }
      row_swap(t, bi);
      col_swap(t, bj);
    }
  }

  void clear_gcd_sweep(std::size_t t) {
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        const Int a = D(t, t), b = D(i, t);
        if (a != 0 && b % a == 0) {
          row_add(i, t, -(b / a));
          continue;
        }
        ExtGcd e = ext_gcd(a, b);
        row_combine(t, i, e.p, e.q, -b / e.g, a / e.g);
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        const Int a = D(t, t), b = D(t, j);
        if (a != 0 && b % a == 0) {
          col_add(j, t, -(b / a));
          continue;
        }
        ExtGcd e = ext_gcd(a, b);
        col_combine(t, j, e.p, e.q, -b / e.g, a / e.g);
        clean = false;  // column operations may refill column t
      }
      if (clean) return;
      bool col_clear = true;
      for (std::size_t i = t + 1; i < m; ++i)
        if (D(i, t) != 0) col_clear = false;
      if (col_clear) return;
    }
  }

  std::size_t run(SmithStrategy strategy) {
    std::size_t r = std::min(m, n);
    std::size_t t = 0;
    for (; t < r; ++t) {
      std::size_t pi = 0, pj = 0;
      bool found = strategy == SmithStrategy::MinPivot ? find_min(t, pi, pj) : find_first(t, pi, pj);
      if (!found) break;
      row_swap(t, pi);
      col_swap(t, pj);
      for (;;) {
        if (strategy == SmithStrategy::MinPivot)
          clear_min_pivot(t);
        else
          clear_gcd_sweep(t);
        // The pivot must divide the remaining block.
        bool divides = true;
        for (std::size_t i = t + 1; i < m && divides; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (D(i, j) % D(t, t) != 0) {
              row_add(t, i, 1);
              divides = false;
              break;
            }
        if (divides) break;
      }
      if (D(t, t) < 0) row_neg(t);
    }
    return t;
  }
};

}  // namespace

IntVector SmithForm::diagonal() const {
  std::size_t k = std::min(D.rows(), D.cols());
  IntVector d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = D(i, i);
  return d;
}

SmithForm smith_normal_form(const IntMatrix& A, SmithStrategy strategy) {
  Reducer red(A, true);
  std::size_t rank = red.run(strategy);
  SmithForm f;
  f.U = std::move(red.U);
  f.U_inv = std::move(red.Ui);
  f.V = std::move(red.V);
  f.D = std::move(red.D);
  f.rank = rank;
  return f;
}

IntMatrix kernel_basis(const IntMatrix& A) {
  Reducer red(A, false);
  std::size_t rank = red.run(SmithStrategy::MinPivot);
  std::vector<std::size_t> idx;
  for (std::size_t j = rank; j < A.cols(); ++j) idx.push_back(j);
  IntMatrix K = red.V.select_columns(idx);
  if (idx.empty()) K = IntMatrix(A.cols(), 0);
  return K;
}

LinearSolver::LinearSolver(const IntMatrix& A)
    : rows_(A.rows()), cols_(A.cols()), snf_(smith_normal_form(A)) {}

std::optional<IntVector> LinearSolver::solve(const IntVector& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solver: right-hand side length mismatch");
  if (cols_ == 0) {
    if (!is_zero(b)) return std::nullopt;
    return IntVector{};
  }
  IntVector y = rows_ ? snf_.U * b : IntVector{};
  IntVector z(cols_, Int(0));
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i < snf_.rank) {
      const Int& d = snf_.D(i, i);
      if (y[i] % d != 0) return std::nullopt;
      z[i] = y[i] / d;
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  return snf_.V * z;
}

IntMatrix LinearSolver::kernel() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = snf_.rank; j < cols_; ++j) idx.push_back(j);
  if (idx.empty()) return IntMatrix(cols_, 0);
  return snf_.V.select_columns(idx);
}

}  // namespace rif

#include "b0/zlattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "b0/error.hpp"

namespace b0::zl {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>> &rows,
                               std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw UsageError("dimension mismatch: ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_mod_rows(const ModRows &rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = rows[i][j];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix &rhs) const {
  if (cols_ != rhs.rows_)
    throw UsageError("dimension mismatch in matrix product");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer &a = (*this)(i, k);
      if (a == 0)
        continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out(i, j) += a * rhs(k, j);
    }
  return out;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0)
        return false;
  return true;
}

namespace {

template <bool Track> struct SmithWork {
  IntMatrix a;
  IntMatrix u;
  IntMatrix v;

  explicit SmithWork(const IntMatrix &m) : a(m) {
    if constexpr (Track) {
      u = IntMatrix::identity(m.rows());
      v = IntMatrix::identity(m.cols());
    }
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j)
      return;
    for (std::size_t c = 0; c < a.cols(); ++c)
      std::swap(a(i, c), a(j, c));
    if constexpr (Track)
      for (std::size_t c = 0; c < u.cols(); ++c)
        std::swap(u(i, c), u(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j)
      return;
    for (std::size_t r = 0; r < a.rows(); ++r)
      std::swap(a(r, i), a(r, j));
    if constexpr (Track)
      for (std::size_t r = 0; r < v.rows(); ++r)
        std::swap(v(r, i), v(r, j));
  }
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const Integer &q) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a(j, c) != 0)
        a(i, c) += q * a(j, c);
    if constexpr (Track)
      for (std::size_t c = 0; c < u.cols(); ++c)
        if (u(j, c) != 0)
          u(i, c) += q * u(j, c);
  }
  // col_i += q * col_j
  void add_col(std::size_t i, std::size_t j, const Integer &q) {
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (a(r, j) != 0)
        a(r, i) += q * a(r, j);
    if constexpr (Track)
      for (std::size_t r = 0; r < v.rows(); ++r)
        if (v(r, j) != 0)
          v(r, i) += q * v(r, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      a(i, c) = -a(i, c);
    if constexpr (Track)
      for (std::size_t c = 0; c < u.cols(); ++c)
        u(i, c) = -u(i, c);
  }

  void run() {
    const std::size_t nr = a.rows(), nc = a.cols();
    for (std::size_t t = 0; t < std::min(nr, nc); ++t) {
      // Smallest nonzero entry as pivot; unit pivots come first naturally.
      std::size_t bi = nr, bj = nc;
      Integer best;
      for (std::size_t i = t; i < nr; ++i)
        for (std::size_t j = t; j < nc; ++j)
          if (a(i, j) != 0) {
            Integer m = abs(a(i, j));
            if (bi == nr || m < best) {
              best = m;
              bi = i;
              bj = j;
              if (best == 1)
                goto found;
            }
          }
    found:
      if (bi == nr)
        return;
      swap_rows(t, bi);
      swap_cols(t, bj);

      for (;;) {
        bool residue = false;
        for (std::size_t i = t + 1; i < nr; ++i)
          if (a(i, t) != 0) {
            Integer q = a(i, t) / a(t, t);
            add_row(i, t, -q);
            residue |= a(i, t) != 0;
          }
        for (std::size_t j = t + 1; j < nc; ++j)
          if (a(t, j) != 0) {
            Integer q = a(t, j) / a(t, t);
            add_col(j, t, -q);
            residue |= a(t, j) != 0;
          }
        if (residue) {
          std::size_t pi = t, pj = t;
          Integer m = abs(a(t, t));
          for (std::size_t i = t + 1; i < nr; ++i)
            if (a(i, t) != 0 && abs(a(i, t)) < m) {
              m = abs(a(i, t));
              pi = i;
              pj = t;
            }
          for (std::size_t j = t + 1; j < nc; ++j)
            if (a(t, j) != 0 && abs(a(t, j)) < m) {
              m = abs(a(t, j));
              pi = t;
              pj = j;
            }
          swap_rows(t, pi);
          swap_cols(t, pj);
          continue;
        }
        // Divisibility chain: fold an offending row into the pivot row.
        bool folded = false;
        for (std::size_t i = t + 1; i < nr && !folded; ++i)
          for (std::size_t j = t + 1; j < nc; ++j)
            if (a(i, j) % a(t, t) != 0) {
              add_row(t, i, 1);
              folded = true;
              break;
            }
        if (!folded)
          break;
      }
      if (a(t, t) < 0)
        negate_row(t);
    }
  }
};

} // namespace

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    d.push_back(D(i, i));
  return d;
}

SmithForm smith_normal_form(const IntMatrix &m) {
  SmithWork<true> w(m);
  w.run();
  return {std::move(w.u), std::move(w.a), std::move(w.v)};
}

std::vector<Integer> smith_diagonal(const IntMatrix &m) {
  SmithWork<false> w(m);
  w.run();
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    d.push_back(w.a(i, i));
  return d;
}

Integer determinant(const IntMatrix &m) {
  if (m.rows() != m.cols())
    throw UsageError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0)
    return 1;
  // Bareiss fraction-free elimination.
  IntMatrix a = m;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0)
        ++r;
      if (r == n)
        return 0;
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a(k, c), a(r, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

AbelianInvariants AbelianInvariants::from_cyclic_orders(const std::vector<Integer> &orders,
                                                        std::size_t free_rank) {
  IntMatrix d(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 0)
      throw UsageError("negative cyclic order");
    d(i, i) = orders[i];
  }
  AbelianInvariants out;
  out.free_rank = free_rank;
  for (const auto &x : smith_diagonal(d)) {
    if (x == 0)
      ++out.free_rank;
    else if (x != 1)
      out.factors.push_back(x);
  }
  return out;
}

AbelianInvariants AbelianInvariants::from_cyclic_orders(const std::vector<std::uint64_t> &orders) {
  std::vector<Integer> big(orders.begin(), orders.end());
  return from_cyclic_orders(big);
}

AbelianInvariants AbelianInvariants::cokernel(const IntMatrix &m) {
  AbelianInvariants out;
  const auto diag = smith_diagonal(m);
  std::size_t rank = 0;
  for (const auto &x : diag) {
    if (x == 0)
      continue;
    ++rank;
    if (x != 1)
      out.factors.push_back(x);
  }
  out.free_rank = m.cols() - rank;
  return out;
}

Integer AbelianInvariants::order() const {
  if (free_rank != 0)
    throw UsageError("order of an infinite abelian group");
  Integer o = 1;
  for (const auto &f : factors)
    o *= f;
  return o;
}

std::string AbelianInvariants::to_string() const {
  if (is_trivial())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &f : factors) {
    os << (first ? "" : " x ") << "Z/" << f;
    first = false;
  }
  if (free_rank != 0)
    os << (first ? "" : " x ") << "Z^" << free_rank;
  return os.str();
}

AbelianInvariants direct_sum(const AbelianInvariants &a, const AbelianInvariants &b) {
  std::vector<Integer> all = a.factors;
  all.insert(all.end(), b.factors.begin(), b.factors.end());
  return AbelianInvariants::from_cyclic_orders(all, a.free_rank + b.free_rank);
}

namespace {

void check_width(const IntMatrix &m, std::size_t cols, const char *what) {
  if (m.rows() != 0 && m.cols() != cols)
    throw UsageError(std::string("dimension mismatch: ") + what);
}

// K = {a in Z^g : sum a_i gens_i in L}, L spanned by rels and the ambient
// order vectors; returns Z^g / K.
AbelianInvariants subquotient_integer(const IntMatrix &gens, const IntMatrix &rels,
                                      const std::vector<Integer> &orders) {
  const std::size_t w = orders.size(), g = gens.rows();
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<Integer> r(w + g);
    for (std::size_t j = 0; j < w; ++j)
      r[j] = gens(i, j);
    r[w + i] = 1;
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < rels.rows(); ++i) {
    std::vector<Integer> r(w + g);
    for (std::size_t j = 0; j < w; ++j)
      r[j] = rels(i, j);
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < w; ++j)
    if (orders[j] != 0) {
      std::vector<Integer> r(w + g);
      r[j] = orders[j];
      rows.push_back(std::move(r));
    }

  std::size_t cur = 0;
  for (std::size_t col = 0; col < w && cur < rows.size(); ++col) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = cur; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])))
          best = i;
      if (best == rows.size())
        break;
      std::swap(rows[cur], rows[best]);
      bool others = false;
      for (std::size_t i = cur + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0)
          continue;
        const Integer q = rows[i][col] / rows[cur][col];
        for (std::size_t k = col; k < w + g; ++k)
          if (rows[cur][k] != 0)
            rows[i][k] -= q * rows[cur][k];
        others |= rows[i][col] != 0;
      }
      if (!others) {
        ++cur;
        break;
      }
    }
  }
  IntMatrix kernel(rows.size() - cur, g);
  for (std::size_t i = cur; i < rows.size(); ++i)
    for (std::size_t k = 0; k < g; ++k)
      kernel(i - cur, k) = rows[i][w + k];
  return AbelianInvariants::cokernel(kernel);
}

} // namespace

AbelianInvariants subquotient_invariants_mod(const ModRows &gens, const ModRows &rels,
                                             std::size_t cols, std::uint64_t n) {
  HowellBasis gb(cols, n), rb(cols, n);
  for (const auto &r : gens)
    gb.insert(r);
  for (const auto &r : rels)
    rb.insert(r);
  const ModRows g = gb.rows(), r = rb.rows();
  // Unknowns (a, b): sum a_i g_i - sum b_j r_j == 0; one equation per column.
  const std::size_t unknowns = g.size() + r.size();
  ModRows eq(cols, ModRow(unknowns, 0));
  for (std::size_t k = 0; k < cols; ++k) {
    for (std::size_t i = 0; i < g.size(); ++i)
      eq[k][i] = g[i][k];
    for (std::size_t j = 0; j < r.size(); ++j)
      eq[k][g.size() + j] = (n - r[j][k]) % n;
  }
  ModRows proj;
  for (const auto &v : kernel_mod(eq, unknowns, n))
    proj.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(g.size()));
  return AbelianInvariants::from_cyclic_orders(
      cokernel_cyclic_orders_mod(proj, g.size(), n));
}

AbelianInvariants subquotient_invariants(const IntMatrix &gens, const IntMatrix &rels,
                                         const std::vector<Integer> &ambient_orders) {
  const std::size_t w = ambient_orders.size();
  check_width(gens, w, "generators vs ambient");
  check_width(rels, w, "relations vs ambient");

  bool modular = w > 0;
  Integer lcm = 1;
  for (const auto &m : ambient_orders) {
    if (m < 0)
      throw UsageError("negative ambient order");
    if (m == 0) {
      modular = false;
      break;
    }
    lcm = boost::multiprecision::lcm(lcm, m);
  }
  if (modular && lcm >= 2 && lcm < (Integer(1) << 62)) {
    // Embed Z/m_i into Z/N by multiplication with N/m_i.
    const auto n = static_cast<std::uint64_t>(lcm);
    auto to_mod = [&](const IntMatrix &m) {
      ModRows out(m.rows(), ModRow(w));
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < w; ++j) {
          Integer x = m(i, j) % ambient_orders[j];
          if (x < 0)
            x += ambient_orders[j];
          out[i][j] = static_cast<std::uint64_t>(x * (lcm / ambient_orders[j]));
        }
      return out;
    };
    return subquotient_invariants_mod(to_mod(gens), to_mod(rels), w, n);
  }
  if (modular && lcm == 1)
    return AbelianInvariants::trivial();
  return subquotient_integer(gens, rels, ambient_orders);
}

IntMatrix kernel_mod(const IntMatrix &m, std::uint64_t n) {
  if (n < 2)
    throw UsageError("kernel_mod requires n >= 2");
  ModRows rows(m.rows(), ModRow(m.cols()));
  const Integer big_n = n;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Integer x = m(i, j) % big_n;
      if (x < 0)
        x += big_n;
      rows[i][j] = static_cast<std::uint64_t>(x);
    }
  return IntMatrix::from_mod_rows(kernel_mod(rows, m.cols(), n), m.cols());
}

} // namespace b0::zl

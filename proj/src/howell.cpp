#include "b0/howell.hpp"

#include <numeric>
#include <utility>

#include "b0/error.hpp"

namespace b0::zl {

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0)
    return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t reduce_signed(std::int64_t a, std::uint64_t n) {
  const auto sn = static_cast<std::int64_t>(n);
  std::int64_t r = a % sn;
  if (r < 0)
    r += sn;
  return static_cast<std::uint64_t>(r);
}

namespace {

// dst = a*x + b*y (mod n), starting at column `from`.
void combine(ModRow &dst, std::uint64_t a, const ModRow &x, std::uint64_t b,
             const ModRow &y, std::uint64_t n, std::size_t from) {
  for (std::size_t k = from; k < dst.size(); ++k)
    dst[k] = (mul_mod(a, x[k], n) + mul_mod(b, y[k], n)) % n;
}

void scale(ModRow &v, std::uint64_t a, std::uint64_t n) {
  for (auto &e : v)
    e = mul_mod(a, e, n);
}

// v -= q * p  (mod n), from column `from`.
void sub_multiple(ModRow &v, std::uint64_t q, const ModRow &p, std::uint64_t n,
                  std::size_t from) {
  if (q == 0)
    return;
  const std::uint64_t neg = n - q % n;
  for (std::size_t k = from; k < v.size(); ++k)
    if (p[k] != 0)
      v[k] = (v[k] + mul_mod(neg, p[k], n)) % n;
}

// A unit u of Z/n with u*a == gcd(a, n) (mod n).
std::uint64_t normalizing_unit(std::uint64_t a, std::uint64_t n) {
  const auto g = std::gcd(a, n);
  const std::uint64_t m = n / g;
  if (m == 1)
    return 1;
  const auto t = (a / g) % m;
  const auto eg = ext_gcd(static_cast<std::int64_t>(t), static_cast<std::int64_t>(m));
  std::uint64_t u = reduce_signed(eg.s, m);
  while (std::gcd(u, n) != 1)
    u += m;
  return u % n;
}

} // namespace

HowellBasis::HowellBasis(std::size_t cols, std::uint64_t modulus)
    : cols_(cols), n_(modulus), pivots_(cols) {
  if (modulus < 2)
    throw UsageError("modulus must be at least 2");
}

void HowellBasis::insert(ModRow row) {
  B0_ASSERT(row.size() == cols_, "row width mismatch in HowellBasis::insert");
  std::vector<ModRow> work;
  work.push_back(std::move(row));
  while (!work.empty()) {
    ModRow v = std::move(work.back());
    work.pop_back();
    insert_one(std::move(v), work);
  }
}

void HowellBasis::insert_one(ModRow v, std::vector<ModRow> &work) {
  for (std::size_t j = 0; j < cols_; ++j) {
    if (v[j] == 0)
      continue;
    auto &slot = pivots_[j];
    if (!slot) {
      scale(v, normalizing_unit(v[j], n_), n_);
      const std::uint64_t d = v[j];
      if (d != 1) {
        ModRow ann = v;
        scale(ann, n_ / d, n_);
        work.push_back(std::move(ann));
      }
      slot = std::move(v);
      return;
    }
    ModRow &p = *slot;
    const std::uint64_t d = p[j];
    if (v[j] % d == 0) {
      sub_multiple(v, v[j] / d, p, n_, j);
      continue;
    }
    const auto eg = ext_gcd(static_cast<std::int64_t>(d), static_cast<std::int64_t>(v[j]));
    const auto g = static_cast<std::uint64_t>(eg.g);
    ModRow w(cols_, 0);
    combine(w, reduce_signed(eg.s, n_), p, reduce_signed(eg.t, n_), v, n_, 0);
    ModRow r(cols_, 0);
    combine(r, (v[j] / g) % n_, p, (n_ - (d / g) % n_) % n_, v, n_, 0);
    ModRow ann = w;
    scale(ann, n_ / g, n_);
    p = std::move(w);
    work.push_back(std::move(r));
    work.push_back(std::move(ann));
    return;
  }
}

bool HowellBasis::reduce(ModRow &v) const {
  for (std::size_t j = 0; j < cols_; ++j) {
    if (v[j] == 0)
      continue;
    const auto &slot = pivots_[j];
    if (!slot || v[j] % (*slot)[j] != 0)
      return false;
    sub_multiple(v, v[j] / (*slot)[j], *slot, n_, j);
  }
  return true;
}

ModRows HowellBasis::rows() const {
  ModRows out;
  for (const auto &slot : pivots_)
    if (slot)
      out.push_back(*slot);
  return out;
}

std::uint64_t HowellBasis::span_order() const {
  std::uint64_t order = 1;
  for (std::size_t j = 0; j < cols_; ++j)
    if (pivots_[j])
      order *= n_ / (*pivots_[j])[j];
  return order;
}

ModRows kernel_mod(const ModRows &m, std::size_t cols, std::uint64_t n) {
  HowellBasis rowspace(cols, n);
  for (const auto &r : m)
    rowspace.insert(r);
  const ModRows h = rowspace.rows();
  const std::size_t hr = h.size();

  // Rows (column k of H | e_k); those with a zero H-block span the kernel.
  HowellBasis aug(hr + cols, n);
  for (std::size_t k = 0; k < cols; ++k) {
    ModRow row(hr + cols, 0);
    for (std::size_t i = 0; i < hr; ++i)
      row[i] = h[i][k];
    row[hr + k] = 1 % n;
    aug.insert(std::move(row));
  }
  ModRows kernel;
  for (const auto &r : aug.rows()) {
    bool zero_prefix = true;
    for (std::size_t i = 0; i < hr && zero_prefix; ++i)
      zero_prefix = r[i] == 0;
    if (zero_prefix)
      kernel.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(hr), r.end());
  }
  return kernel;
}

std::vector<std::uint64_t> cokernel_cyclic_orders_mod(const ModRows &rows_in,
                                                      std::size_t cols,
                                                      std::uint64_t n) {
  ModRows a = rows_in;
  for (auto &r : a) {
    B0_ASSERT(r.size() == cols, "row width mismatch in cokernel");
    for (auto &e : r)
      e %= n;
  }
  const std::size_t nr = a.size();
  std::vector<std::uint64_t> orders;
  std::size_t t = 0;
  for (; t < nr && t < cols; ++t) {
    // Pivot: entry with the smallest gcd against n.
    std::size_t bi = nr, bj = cols;
    std::uint64_t best = 0;
    for (std::size_t i = t; i < nr; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0) {
          const auto g = std::gcd(a[i][j], n);
          if (bi == nr || g < best) {
            best = g;
            bi = i;
            bj = j;
          }
        }
    if (bi == nr)
      break;
    std::swap(a[t], a[bi]);
    if (bj != t)
      for (auto &r : a)
        std::swap(r[t], r[bj]);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      scale(a[t], normalizing_unit(a[t][t], n), n);
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a[i][t] == 0)
          continue;
        const std::uint64_t d = a[t][t];
        if (a[i][t] % d == 0) {
          sub_multiple(a[i], a[i][t] / d, a[t], n, t);
          continue;
        }
        const auto eg = ext_gcd(static_cast<std::int64_t>(d), static_cast<std::int64_t>(a[i][t]));
        const auto g = static_cast<std::uint64_t>(eg.g);
        ModRow w(cols, 0), r(cols, 0);
        combine(w, reduce_signed(eg.s, n), a[t], reduce_signed(eg.t, n), a[i], n, 0);
        combine(r, (a[i][t] / g) % n, a[t], (n - (d / g) % n) % n, a[i], n, 0);
        a[t] = std::move(w);
        a[i] = std::move(r);
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0)
          continue;
        const std::uint64_t d = a[t][t];
        if (a[t][j] % d == 0) {
          const std::uint64_t q = a[t][j] / d;
          for (std::size_t i = 0; i < nr; ++i)
            if (a[i][t] != 0)
              a[i][j] = (a[i][j] + mul_mod(n - q % n, a[i][t], n)) % n;
          continue;
        }
        const auto eg = ext_gcd(static_cast<std::int64_t>(d), static_cast<std::int64_t>(a[t][j]));
        const auto g = static_cast<std::uint64_t>(eg.g);
        const auto s = reduce_signed(eg.s, n), tt = reduce_signed(eg.t, n);
        const auto c1 = (a[t][j] / g) % n, c2 = (n - (d / g) % n) % n;
        for (std::size_t i = 0; i < nr; ++i) {
          const auto x = a[i][t], y = a[i][j];
          a[i][t] = (mul_mod(s, x, n) + mul_mod(tt, y, n)) % n;
          a[i][j] = (mul_mod(c1, x, n) + mul_mod(c2, y, n)) % n;
        }
        dirty = true;
      }
      for (std::size_t i = t + 1; i < nr && !dirty; ++i)
        dirty = a[i][t] != 0;
    }
    const auto d = std::gcd(a[t][t], n);
    if (d != 1)
      orders.push_back(d);
  }
  for (; t < cols; ++t)
    if (n != 1)
      orders.push_back(n);
  return orders;
}

} // namespace b0::zl

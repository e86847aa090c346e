#include "doctest.h"

#include <random>
#include <set>

#include "b0/howell.hpp"
#include "b0/zlattice.hpp"

using namespace b0;
using namespace b0::zl;

namespace {

IntMatrix rows(const std::vector<std::vector<std::int64_t>> &r, std::size_t cols) {
  return IntMatrix::from_rows(r, cols);
}

std::vector<Integer> nonzero(const std::vector<Integer> &d) {
  std::vector<Integer> out;
  for (const auto &x : d)
    if (x != 0)
      out.push_back(abs(x));
  return out;
}

IntMatrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, std::int64_t lo,
                        std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = d(rng);
  return m;
}

// Elements of prod Z/orders generated by gens, by breadth-first closure.
std::set<std::vector<std::int64_t>> span(const std::vector<std::vector<std::int64_t>> &gens,
                                         const std::vector<std::int64_t> &orders) {
  std::set<std::vector<std::int64_t>> seen{std::vector<std::int64_t>(orders.size(), 0)};
  std::vector<std::vector<std::int64_t>> queue(seen.begin(), seen.end());
  for (std::size_t t = 0; t < queue.size(); ++t)
    for (const auto &g : gens) {
      auto v = queue[t];
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = ((v[i] + g[i]) % orders[i] + orders[i]) % orders[i];
      if (seen.insert(v).second)
        queue.push_back(v);
    }
  return seen;
}

} // namespace

TEST_SUITE("zlattice") {

TEST_CASE("smith normal form examples") {
  CHECK(AbelianInvariants::cokernel(rows({{2, 0}, {0, 4}}, 2)).to_string() == "Z/2 x Z/4");
  CHECK(nonzero(smith_diagonal(rows({{2, 1}, {0, 2}}, 2))) == std::vector<Integer>{1, 4});
  const IntMatrix zero(3, 3);
  CHECK(nonzero(smith_diagonal(zero)).empty());
  const auto z3 = AbelianInvariants::cokernel(zero);
  CHECK(z3.free_rank == 3);
  CHECK(z3.factors.empty());
}

TEST_CASE("smith transforms are unimodular and reproduce D") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix m = random_matrix(rng, 4, 5, -9, 9);
    const SmithForm s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    const auto d = s.diagonal();
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
      if (d[i] != 0)
        CHECK(d[i + 1] % d[i] == 0);
  }
}

TEST_CASE("smith invariants are transpose and permutation invariant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const IntMatrix m = random_matrix(rng, 5, 4, -6, 6);
    CHECK(nonzero(smith_diagonal(m)) == nonzero(smith_diagonal(m.transpose())));
    IntMatrix p(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        p(m.rows() - 1 - i, (j + 1) % m.cols()) = m(i, j);
    CHECK(nonzero(smith_diagonal(m)) == nonzero(smith_diagonal(p)));
  }
}

TEST_CASE("exact arithmetic with entries near 2^60") {
  std::mt19937_64 rng(13);
  const std::int64_t big = std::int64_t(1) << 60;
  for (int trial = 0; trial < 10; ++trial) {
    const IntMatrix m = random_matrix(rng, 3, 3, -big, big);
    const auto d = nonzero(smith_diagonal(m));
    Integer prod = 1;
    for (const auto &x : d)
      prod *= x;
    CHECK(prod == abs(determinant(m)));
    const SmithForm s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.D);
  }
}

TEST_CASE("subquotient examples") {
  CHECK(subquotient_invariants(rows({{1}}, 1), rows({{2}}, 1), {4}).to_string() == "Z/2");
  CHECK(subquotient_invariants(rows({{1, 1}}, 2), IntMatrix(0, 2), {2, 2}).to_string() == "Z/2");
}

TEST_CASE("subquotient orders match coset enumeration") {
  std::mt19937_64 rng(17);
  const std::vector<std::int64_t> orders{4, 4, 2, 2, 2, 2}; // 2^8 elements
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::int64_t> d(0, 3);
    std::vector<std::vector<std::int64_t>> g(2, std::vector<std::int64_t>(6)),
        r(2, std::vector<std::int64_t>(6));
    for (auto *set : {&g, &r})
      for (auto &row : *set)
        for (std::size_t i = 0; i < 6; ++i)
          row[i] = d(rng) % orders[i];
    auto both = g;
    both.insert(both.end(), r.begin(), r.end());
    const auto big = span(both, orders), small = span(r, orders);
    std::vector<Integer> amb(orders.begin(), orders.end());
    const auto inv = subquotient_invariants(rows(g, 6), rows(r, 6), amb);
    CHECK(inv.order() == Integer(big.size() / small.size()));
  }
}

TEST_CASE("monotone under added relations") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const IntMatrix g = random_matrix(rng, 3, 4, -5, 5);
    IntMatrix r = random_matrix(rng, 2, 4, -5, 5);
    const auto a = subquotient_invariants(g, r, std::vector<Integer>(4, 12));
    IntMatrix r2(3, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        r2(i, j) = r(i, j);
    const IntMatrix extra = random_matrix(rng, 1, 4, -5, 5);
    for (std::size_t j = 0; j < 4; ++j)
      r2(2, j) = extra(0, j);
    const auto b = subquotient_invariants(g, r2, std::vector<Integer>(4, 12));
    CHECK(a.order() % b.order() == 0);
  }
}

TEST_CASE("kernel mod n examples") {
  const auto k = kernel_mod(ModRows{{2}}, 1, 4);
  HowellBasis b(1, 4);
  for (const auto &r : k)
    b.insert(r);
  CHECK(b.span_order() == 2);
  CHECK(b.contains({2}));
  const auto id = kernel_mod(ModRows{{1, 0}, {0, 1}}, 2, 6);
  for (const auto &r : id)
    CHECK(r == ModRow{0, 0});
}

TEST_CASE("kernel mod 12 verified by substitution and exhaustive count") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint64_t> d(0, 11);
  ModRows m(20, ModRow(30));
  for (auto &row : m)
    for (auto &x : row)
      x = d(rng) % 4 == 0 ? d(rng) : 0;
  for (const auto &v : kernel_mod(m, 30, 12))
    for (const auto &row : m) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < 30; ++i)
        s = (s + row[i] * v[i]) % 12;
      CHECK(s == 0);
    }
  ModRows small(5, ModRow(5));
  for (auto &row : small)
    for (auto &x : row)
      x = d(rng);
  std::uint64_t count = 0;
  std::vector<std::uint64_t> x(5, 0);
  for (std::uint64_t idx = 0; idx < 248832; ++idx) {
    std::uint64_t t = idx;
    for (auto &xi : x) {
      xi = t % 12;
      t /= 12;
    }
    bool ok = true;
    for (const auto &row : small) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < 5; ++i)
        s += row[i] * x[i];
      ok &= s % 12 == 0;
    }
    count += ok;
  }
  HowellBasis b(5, 12);
  for (const auto &r : kernel_mod(small, 5, 12))
    b.insert(r);
  CHECK(b.span_order() == count);
}

}

#pragma once

// Exact integer linear algebra: Smith normal form over Z, finite abelian
// group invariants, subquotients of finite abelian groups and kernels over
// Z/n. Entries are arbitrary precision.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "b0/howell.hpp"

namespace b0::zl {

using Integer = boost::multiprecision::cpp_int;

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>> &rows,
                             std::size_t cols);
  static IntMatrix from_mod_rows(const ModRows &rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer &operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix &rhs) const;
  bool operator==(const IntMatrix &rhs) const = default;

  bool is_diagonal() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

struct SmithForm {
  IntMatrix U; // rows x rows, unimodular
  IntMatrix D; // rows x cols, diagonal with d_1 | d_2 | ... and d_i >= 0
  IntMatrix V; // cols x cols, unimodular
  std::vector<Integer> diagonal() const;
};

// U * M * V == D.
SmithForm smith_normal_form(const IntMatrix &m);

// Diagonal of the Smith form only (no transforms tracked).
std::vector<Integer> smith_diagonal(const IntMatrix &m);

Integer determinant(const IntMatrix &m);

// Finite (or finitely generated) abelian group as invariant factors
// d_1 | d_2 | ... | d_k with every d_i >= 2, plus a free rank that is zero
// for every finite group.
struct AbelianInvariants {
  std::vector<Integer> factors;
  std::size_t free_rank = 0;

  static AbelianInvariants trivial() { return {}; }
  // Normalizes an arbitrary direct sum of cyclic groups (orders >= 1).
  static AbelianInvariants from_cyclic_orders(const std::vector<Integer> &orders,
                                              std::size_t free_rank = 0);
  static AbelianInvariants from_cyclic_orders(const std::vector<std::uint64_t> &orders);
  // Cokernel Z^cols / rowspace(m).
  static AbelianInvariants cokernel(const IntMatrix &m);

  bool is_trivial() const { return factors.empty() && free_rank == 0; }
  bool is_finite() const { return free_rank == 0; }
  Integer order() const;
  std::string to_string() const;
  bool operator==(const AbelianInvariants &) const = default;
};

// Invariants of A (+) B for finite abelian A, B.
AbelianInvariants direct_sum(const AbelianInvariants &a, const AbelianInvariants &b);

// (<gens> + <rels>) / <rels> inside the ambient group prod Z/ambient_orders[i]
// (an order of 0 stands for an infinite cyclic factor). Vectors are rows.
AbelianInvariants subquotient_invariants(const IntMatrix &gens, const IntMatrix &rels,
                                         const std::vector<Integer> &ambient_orders);

// Same, for an ambient group (Z/n)^cols; the fast path used by the engines.
AbelianInvariants subquotient_invariants_mod(const ModRows &gens, const ModRows &rels,
                                             std::size_t cols, std::uint64_t n);

// Generators (rows) of {x : M x == 0 mod n}.
IntMatrix kernel_mod(const IntMatrix &m, std::uint64_t n);

} // namespace b0::zl

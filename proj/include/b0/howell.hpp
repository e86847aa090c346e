#pragma once

// Linear algebra over Z/n for composite n.
//
// Z/n is not a field, so row echelon forms are built with unimodular 2x2
// gcd transforms and every pivot row p with pivot d also contributes its
// annihilator multiple (n/d)*p. The resulting basis has the Howell property:
// the span elements vanishing on the first k columns are exactly the span of
// the pivot rows whose pivot column is >= k. Kernel extraction and membership
// tests rely on that property.

#include <cstdint>
#include <optional>
#include <vector>

namespace b0::zl {

using ModRow = std::vector<std::uint64_t>;
using ModRows = std::vector<ModRow>;

struct ExtGcd {
  std::int64_t g;
  std::int64_t s;
  std::int64_t t;
};

// s*a + t*b == g == gcd(a, b), g >= 0.
ExtGcd ext_gcd(std::int64_t a, std::int64_t b);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n);
std::uint64_t reduce_signed(std::int64_t a, std::uint64_t n);

class HowellBasis {
public:
  HowellBasis(std::size_t cols, std::uint64_t modulus);

  // Adds a row (entries already in [0, n)) to the spanned submodule.
  void insert(ModRow row);

  // Reduces v by the pivot rows. Returns true iff v lies in the span; on
  // return v holds the reduced remainder (zero when contained).
  bool reduce(ModRow &v) const;
  bool contains(ModRow v) const { return reduce(v); }

  // Pivot rows ordered by pivot column.
  ModRows rows() const;

  std::size_t cols() const { return cols_; }
  std::uint64_t modulus() const { return n_; }

  // Number of elements of the spanned submodule.
  std::uint64_t span_order() const;

private:
  void insert_one(ModRow v, std::vector<ModRow> &work);

  std::size_t cols_;
  std::uint64_t n_;
  std::vector<std::optional<ModRow>> pivots_;
};

// Generators of {x in (Z/n)^c : M x == 0 (mod n)} where M is given by rows.
ModRows kernel_mod(const ModRows &m, std::size_t cols, std::uint64_t n);

// Orders of the cyclic summands of (Z/n)^cols / span(rows). Each entry
// divides n; the list is not normalized into a divisibility chain.
std::vector<std::uint64_t> cokernel_cyclic_orders_mod(const ModRows &rows,
                                                      std::size_t cols,
                                                      std::uint64_t n);

} // namespace b0::zl

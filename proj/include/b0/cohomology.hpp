#pragma once

// Brute-force H^2(G, Q/Z) and B0(G) for small enumerated groups.
//
// Coefficients Q/Z are replaced by Z/n with |G| dividing n: H^2(G, Z/n)
// maps onto H^2(G, Q/Z) with kernel the Bockstein image of Hom(G, Q/Z).
// A normalized cocycle c is determined by its generator columns c(x, s),
// s in a generating set S, since c(x, ys) = c(x, y) + c(xy, s) - c(y, s).
// Those columns are the coordinates used throughout; the cocycle condition
// becomes the requirement that every spanning-tree-free path agrees.

#include <cstdint>
#include <string>
#include <vector>

#include "b0/group_table.hpp"
#include "b0/groupkit.hpp"
#include "b0/howell.hpp"
#include "b0/zlattice.hpp"

namespace b0 {

constexpr std::uint64_t kOracleDefaultCap = 72;
constexpr std::uint64_t kOracleHardCap = 128;

// B0_ORACLE_CAP when set (clamped to the hard cap), else the default.
std::uint64_t oracle_cap();

// Values c(x, y) in Z/n on a subgroup (or the whole group), row-major over
// `elements`; elements[0] is the identity.
struct Cocycle {
  std::uint64_t modulus = 0;
  std::vector<Id> elements;
  std::vector<std::uint64_t> values;

  std::uint64_t at(std::size_t i, std::size_t j) const { return values[i * elements.size() + j]; }
};

bool is_normalized_cocycle(const GroupTable &g, const Cocycle &c);

class H2Presentation {
public:
  std::uint64_t modulus() const { return n_; }
  const std::vector<Id> &elements() const { return elems_; }
  // Generating set S (ids in the ambient table).
  std::vector<Id> generators() const;
  std::size_t coordinate_count() const { return (elems_.size() - 1) * gens_.size(); }

  const zl::ModRows &cocycles() const { return cocycles_; }
  const zl::ModRows &coboundaries() const { return coboundaries_; }
  const zl::ModRows &bockstein() const { return bockstein_; }

  // Z^2 / (B^2 + Bockstein), i.e. H^2(G, Q/Z).
  zl::AbelianInvariants h2() const;

  Cocycle expand(const zl::ModRow &coords) const;
  zl::ModRow coordinates(const Cocycle &c) const;
  // Whether c lies in B^2 (+ Bockstein image when requested).
  bool contains(const Cocycle &c, bool with_bockstein) const;

private:
  friend H2Presentation h2_mod(const GroupTable &g, const Subgroup &a, std::uint64_t n);

  const GroupTable *g_ = nullptr;
  std::uint64_t n_ = 0;
  std::vector<Id> elems_;
  std::vector<std::int64_t> local_; // ambient id -> index in elems_, or -1
  std::vector<std::size_t> gens_;   // local indices
  std::vector<std::size_t> bfs_;    // local indices, root first
  std::vector<std::pair<std::size_t, std::size_t>> parent_; // (y', s)
  zl::ModRows cocycles_, coboundaries_, bockstein_;
};

// Presentation on the subgroup a of g (a = whole group for G itself).
// Throws CapExceeded above the hard cap and UsageError when |a| does not
// divide n.
H2Presentation h2_mod(const GroupTable &g, const Subgroup &a, std::uint64_t n);
H2Presentation h2_mod(const GroupTable &g, std::uint64_t n);

// Pointwise restriction to a <= G.
Cocycle restrict_class(const GroupTable &g, const Subgroup &a, const Cocycle &c);

enum class SubgroupMode { abelian, bicyclic };

struct OracleResult {
  zl::AbelianInvariants b0;
  zl::AbelianInvariants h2;
  std::uint64_t modulus = 0;
  std::size_t subgroups_checked = 0;
};

// B0(G) = classes vanishing in H^2(A, Q/Z) for every A of the family
// (maximal abelian subgroups, or all bicyclic ones). n = 0 picks |G|.
OracleResult b0_oracle(const GroupTable &g, SubgroupMode mode, std::uint64_t n = 0,
                       std::uint64_t cap = 0);

} // namespace b0

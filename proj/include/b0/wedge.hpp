#pragma once

// Exterior-square calculus modulo M0*(G). The symbols x ^ y live in the
// abelian group Q = [G, G^phi] / M0*(G) (abelian when G' is), written
// additively over the basis w_ij = g_i ^ g_j, i > j. Expansion rules:
//   SPLIT-L  xy ^ z = x ^ z + [x,z] ^ y + y ^ z
//   SPLIT-R  x ^ yz = x ^ z + x ^ y + [x,y] ^ z
//   INV      x^-1 ^ z = -(x ^ z) - [x,z] ^ x^-1   (and its mirror)
//   COMMUTE-ZERO  x ^ y = 0 whenever [x,y] = 1
//   BASE     g_i ^ g_j = w_ij, -w_ji or 0
// Correction terms have strictly larger commutator weight, so expansion
// terminates on groups of class <= 4.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "b0/howell.hpp"
#include "b0/pcgroup.hpp"
#include "b0/zlattice.hpp"

namespace b0 {

using WedgeVector = std::vector<std::int64_t>;

enum class Rule { split_l, split_r, inv_l, inv_r, commute_zero, base };
std::string rule_tag(Rule r);

// One expansion step. Elements are stored as words: the spelling being
// expanded for spelling-driven nodes, the normal form otherwise.
struct TraceNode {
  Rule rule = Rule::commute_zero;
  Word u, v;
  Word a, b; // SPLIT-L: u = a*b; SPLIT-R: v = a*b; INV: the inverted letter in a
  std::vector<std::pair<std::size_t, std::int64_t>> children;
  WedgeVector result;
};

class WedgeEngine {
public:
  // Requires G' abelian and class <= 4.
  explicit WedgeEngine(const PcGroup &g);

  const PcGroup &group() const { return *g_; }
  std::size_t dim() const { return dim_; }
  // Index of w_ij, i > j.
  std::size_t pair_index(std::size_t i, std::size_t j) const { return i * (i - 1) / 2 + j; }
  std::pair<std::size_t, std::size_t> pair_of(std::size_t idx) const;
  std::string pair_name(std::size_t idx) const;

  // Q-value of u ^ v by element normal forms (memoized).
  WedgeVector expand(const Element &u, const Element &v);
  // Spelling-driven expansion of the words; returns the root node.
  std::size_t expand_words(const Word &u, const Word &v);
  std::size_t expand_node(const Element &u, const Element &v);

  const std::vector<TraceNode> &nodes() const { return nodes_; }
  const TraceNode &node(std::size_t id) const { return nodes_[id]; }

  // Image [g_i, g_j] of w_ij.
  Element evaluate(const WedgeVector &w) const;

private:
  std::size_t add_node(TraceNode n);
  std::size_t split_words(const Word &u, const Word &v, bool spelled);

  const PcGroup *g_;
  std::size_t dim_;
  std::vector<TraceNode> nodes_;
  std::map<std::pair<Element, Element>, std::size_t> memo_;
  std::map<std::pair<Element, Element>, bool> active_;
  std::size_t depth_ = 0;
};

// Relators of the presentation as words (g_i^m * rhs^-1 and
// [g_j, g_i] * rhs^-1), with a readable description each.
std::vector<std::pair<Word, std::string>> defining_relators(const PcGroup &g);

// Relation lattice on the w_ij together with the evaluation map.
struct WedgeLattice {
  std::size_t dim = 0;
  std::vector<WedgeVector> relations;
  std::vector<std::string> sources;
  // Trace node of each relation; kNoNode for w_ij = 0 from commuting
  // generators, whose pair is recorded in `pairs`.
  std::vector<std::size_t> roots;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

inline constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

struct WedgeResult {
  zl::AbelianInvariants invariants;   // ker(eps) / relations
  zl::AbelianInvariants lattice;      // Z^dim / relations
  std::uint64_t derived_order = 0;    // |G'|
  std::uint64_t modulus = 0;          // D with D Z^dim inside the lattice (0: integer path)
  std::size_t relation_count = 0;
  std::size_t commuting_pairs = 0;
};

// Relator expansions (every relator ^ every generator) plus w_ij = 0 for
// commuting generator pairs.
WedgeLattice relator_lattice(WedgeEngine &e);

// ker(eps) / lattice, with extra bilinear relation rows.
WedgeResult wedge_quotient(WedgeEngine &e, const WedgeLattice &lat,
                           const std::vector<WedgeVector> &extra = {});

// Exact B0~(G) for class <= 2 (bilinear commuting-pair enumeration).
WedgeResult b0_class2(const PcGroup &g, std::uint64_t pair_cap = 50'000'000);

// [x^n, y] = [x,y]^n [x,y,x]^C(n,2) [x,y,x,x]^C(n,3) [x,y,x,x,x]^C(n,4)
//            [x,y,x,[x,y]]^(n(n-1)(2n-1)/6), valid in class <= 5 (caller checks).
Element power_comm_expand(const PcGroup &g, const Element &x, const Element &y, std::int64_t n);

} // namespace b0

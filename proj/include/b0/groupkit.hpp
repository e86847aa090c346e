#pragma once

// Subgroups, commutator structure and the finite terms
// (N cap G') / <N cap K(G)> of enumerated groups.

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "b0/group_table.hpp"
#include "b0/kernels.hpp"
#include "b0/pcgroup.hpp"
#include "b0/zlattice.hpp"

namespace b0 {

struct Subgroup {
  std::vector<Id> members; // sorted
  std::vector<Id> gens;

  std::size_t order() const { return members.size(); }
  bool contains(Id x) const;
  bool operator==(const Subgroup &o) const { return members == o.members; }
};

GroupTable enumerate(std::shared_ptr<const PcGroup> g, std::uint64_t cap);

Subgroup trivial_subgroup();
Subgroup whole_group(const GroupTable &g);
Subgroup subgroup_closure(const GroupTable &g, const std::vector<Id> &gens);
Subgroup normal_closure(const GroupTable &g, const std::vector<Id> &gens);
bool is_normal(const GroupTable &g, const Subgroup &h);
Subgroup intersection(const Subgroup &a, const Subgroup &b);

// K(G) as a membership bitmap.
kernels::Bitmap commutator_set(const GroupTable &g);
Subgroup derived_subgroup(const GroupTable &g);
Subgroup center(const GroupTable &g);
bool is_commutator_closed(const GroupTable &g);
bool is_abelian(const GroupTable &g);

std::vector<std::pair<Id, Id>> commuting_pairs_exhaustive(const GroupTable &g);

// Class-2 commuting pairs without enumerating G. The tail
// N = <g_s, ..., g_n> is central, and every commuting pair of G is
// (t1 n1, t2 n2) with (t1, t2) a listed transversal pair and n1, n2 in N.
struct BilinearPairs {
  std::size_t central_start = 0;
  std::uint64_t tail_order = 1;
  std::uint64_t transversal_size = 1;
  std::vector<std::pair<Element, Element>> pairs;
};
// Smallest s with <g_s..g_n> central.
std::size_t central_tail_start(const PcGroup &g);
BilinearPairs commuting_pairs_bilinear(const PcGroup &g, std::uint64_t cap);

// Distinct subgroups <x, y> with [x, y] = 1 (all cyclic subgroups included).
std::vector<Subgroup> bicyclic_subgroups(const GroupTable &g);
// Maximal abelian subgroups (maximal cliques of the commuting graph).
std::vector<Subgroup> maximal_abelian_subgroups(const GroupTable &g);

int nilpotency_class(const PcGroup &g);
int nilpotency_class(const GroupTable &g);

struct Abelianization {
  zl::AbelianInvariants invariants;
  // Image of each pc generator in the cyclic factors (in order).
  std::vector<std::vector<zl::Integer>> generator_images;
};
Abelianization abelianization(const PcGroup &g);

// Invariants of A / B for B <= A with A / B abelian.
zl::AbelianInvariants quotient_invariants(const GroupTable &g, const Subgroup &a,
                                          const Subgroup &b);

// (N cap G') / <N cap K(G)>; N must be normal.
zl::AbelianInvariants transgression_image(const GroupTable &g, const Subgroup &n);
// Same, with K(G) supplied as a membership predicate.
zl::AbelianInvariants transgression_image(const GroupTable &g, const Subgroup &n,
                                          const std::function<bool(Id)> &in_k);

// Freest special p-groups: an element of H' is a commutator iff its
// alternating form over F_p has rank <= 2. `x` must lie in H'.
bool freest_special_is_commutator(const PcGroup &h, std::size_t d, const Element &x);

} // namespace b0

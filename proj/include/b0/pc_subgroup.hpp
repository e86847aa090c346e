#pragma once

// Subgroups of a pc group held as induced pc sequences, so that membership,
// order and series computations never enumerate the group.

#include <cstdint>
#include <optional>
#include <vector>

#include "b0/pcgroup.hpp"

namespace b0 {

class PcSubgroup {
public:
  explicit PcSubgroup(const PcGroup &g); // trivial subgroup

  static PcSubgroup generated(const PcGroup &g, const std::vector<Element> &gens);
  static PcSubgroup normal_closure(const PcGroup &g, const std::vector<Element> &gens);
  static PcSubgroup whole(const PcGroup &g);

  const PcGroup &group() const { return *g_; }

  bool contains(Element x) const;
  std::uint64_t order() const;
  bool is_trivial() const { return order() == 1; }
  bool is_abelian() const;
  bool is_normal() const;

  // Induced pc sequence: one element per occupied leading index.
  std::vector<Element> basis() const;
  // Exponent of the basis element at each leading index relative to g_i;
  // 0 when the slot is empty.
  std::vector<std::int64_t> leading_exponents() const;

  // All elements, each exactly once. Throws CapExceeded above cap.
  std::vector<Element> elements(std::uint64_t cap) const;

  bool operator==(const PcSubgroup &o) const;

private:
  void insert(Element x);
  void close(bool normal);

  const PcGroup *g_;
  std::vector<std::optional<Element>> slots_;
};

// Leading index of x (rank() for the identity).
std::size_t leading_index(const Element &x);

PcSubgroup derived_subgroup_pc(const PcGroup &g);
// gamma_1 = G, gamma_{k+1} = [gamma_k, G], up to and including the trivial term.
std::vector<PcSubgroup> lower_central_series(const PcGroup &g);
// Throws UsageError if G is not nilpotent.
int nilpotency_class_pc(const PcGroup &g);

} // namespace b0

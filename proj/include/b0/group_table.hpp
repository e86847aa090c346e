#pragma once

// Enumerated finite groups. Elements are ids 0..order-1 with 0 the identity.
// A table is either backed by a pc group (id = mixed-radix index of the
// normal form, products collected on demand or read from a cached Cayley
// table) or by an explicit Cayley table.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "b0/pcgroup.hpp"

namespace b0 {

using Id = std::uint32_t;

class GroupTable {
public:
  // Cayley tables are cached up to this order.
  static constexpr std::uint64_t kCayleyLimit = 4096;

  static GroupTable from_pc(std::shared_ptr<const PcGroup> g, std::uint64_t cap);
  // Validates the group axioms; row/column 0 must be the identity.
  static GroupTable from_cayley(std::vector<std::vector<Id>> table);
  // {"order": k, "table": [[...], ...]}
  static GroupTable parse_json(std::string_view text);

  std::size_t order() const { return order_; }
  Id identity() const { return 0; }
  Id mul(Id a, Id b) const;
  Id inv(Id a) const { return inv_[a]; }
  Id commutator(Id a, Id b) const { return mul(inv(mul(b, a)), mul(a, b)); }
  Id conj(Id a, Id b) const { return mul(inv(b), mul(a, b)); } // b^-1 a b
  Id power(Id a, std::int64_t k) const;
  std::size_t element_order(Id a) const;

  // Small generating set (pc generators when pc-backed).
  const std::vector<Id> &generators() const { return gens_; }

  const PcGroup *pc() const { return pc_.get(); }
  std::shared_ptr<const PcGroup> pc_shared() const { return pc_; }
  Element element(Id a) const;
  Id id_of(const Element &e) const;

  std::string label(Id a) const;
  std::string to_json() const;

private:
  GroupTable() = default;
  void finish();

  std::size_t order_ = 0;
  std::shared_ptr<const PcGroup> pc_;
  std::vector<Id> cayley_; // row-major; empty when products are collected
  std::vector<Id> inv_;
  std::vector<Id> gens_;
};

} // namespace b0

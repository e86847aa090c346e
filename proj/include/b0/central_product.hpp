#pragma once

// Central products G = (H x N) / Z, Z = {(a, xi(a)^-1) : a in H1}, and the
// formula B0(G) = (Z cap (H' x N')) / <Z cap (K(H) x K(N))>, valid when
// B0(H) = B0(N) = 0. Elements of G are canonical coset representatives in
// H x N, so G itself is only materialized when small.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "b0/group_table.hpp"
#include "b0/groupkit.hpp"
#include "b0/pcgroup.hpp"
#include "b0/zlattice.hpp"

namespace b0 {

struct CentralProductSpec {
  std::shared_ptr<const PcGroup> left;
  std::shared_ptr<const PcGroup> right;
  std::string left_ref, right_ref;
  std::vector<Element> h1_gens;
  std::vector<Element> n1_gens;
  std::vector<std::pair<Element, Element>> xi; // xi(first) = second
  // Images of the pc generators of H in N (hypothesis (ii)), optional.
  std::optional<std::vector<Element>> eta;
  // Decide K-membership through the alternating-form rank (freest special
  // factors only) instead of a full commutator scan.
  bool alternating_form_k = false;

  // {"left": ref, "right": ref, "H1_gens": [...], "N1_gens": [...],
  //  "xi": [[h, n], ...], "eta": [...], "k_membership": "scan"}
  // Group refs are "catalog:<ref>" or DSL files relative to base_dir.
  static CentralProductSpec parse_json(const std::string &text, const std::string &base_dir);
};

using IdPair = std::pair<Id, Id>;

class CentralProduct {
public:
  CentralProduct(const CentralProductSpec &spec, std::uint64_t factor_cap);

  const GroupTable &left() const { return *h_; }
  const GroupTable &right() const { return *n_; }
  const Subgroup &h1() const { return h1_; }
  const Subgroup &n1() const { return n1_; }
  // xi on every element of H1.
  const std::map<Id, Id> &xi() const { return xi_; }
  // Z as pairs (a, xi(a)^-1), sorted by a.
  const std::vector<IdPair> &z() const { return z_; }
  std::uint64_t order() const { return h_->order() * n_->order() / h1_.order(); }

  IdPair canonical(IdPair x) const;
  IdPair mul(IdPair x, IdPair y) const;
  IdPair embed_left(Id h) const { return canonical({h, 0}); }
  IdPair embed_right(Id n) const { return canonical({0, n}); }

  // Explicit table of G; throws CapExceeded above cap.
  GroupTable materialize(std::uint64_t cap) const;

private:
  std::shared_ptr<GroupTable> h_, n_;
  Subgroup h1_, n1_;
  std::map<Id, Id> xi_;
  std::vector<IdPair> z_;
};

struct CentralProductB0 {
  zl::AbelianInvariants invariants;
  std::uint64_t z_order = 0;
  std::uint64_t z_derived_order = 0; // |Z cap (H' x N')|
  std::uint64_t z_k_order = 0;       // |<Z cap (K(H) x K(N))>|
  bool hypothesis_i = false;         // xi(H1 cap H') within N1 cap K(N)
  std::optional<bool> hypothesis_ii; // eta restricts to xi (when eta given)
  std::string left_precondition;
  std::string right_precondition;
};

// Returns a description of how B0(factor) = 0 was verified, or nullopt when
// it cannot be decided; throws if B0(factor) is nonzero.
using B0TrivialityCheck = std::function<std::optional<std::string>(const PcGroup &)>;

CentralProductB0 central_product_b0(const CentralProduct &cp, const CentralProductSpec &spec,
                                    bool precondition_asserted, const B0TrivialityCheck &check);

} // namespace b0

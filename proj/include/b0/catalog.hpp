#pragma once

// Built-in group families: the order-p^6 groups Phi15(1^6), Phi28(222),
// Phi29(222), Heisenberg groups over Z/r, freest special p-groups, cyclic and
// elementary abelian groups and direct products of any of these.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "b0/pcgroup.hpp"

namespace b0 {

struct CatalogParams {
  std::string family;
  std::int64_t p = 0;              // phi15, phi28, phi29, freest_special, elementary_abelian
  std::int64_t r = 0;              // heisenberg modulus
  std::vector<std::int64_t> d;     // heisenberg chain d_1 | ... | d_n | r
  std::int64_t rank = 0;           // freest_special d, elementary_abelian k
  std::int64_t n = 0;              // cyclic order
  std::vector<CatalogParams> factors; // direct_product

  // "phi28,p=5", "heisenberg,r=4,d=1:2", "cyclic,n=4 x cyclic,n=2".
  static CatalogParams parse(std::string_view ref);
  std::string to_string() const;
};

// Throws UsageError on invalid parameters (p <= 3 for the Phi families, a
// broken divisibility chain, non-prime p, ...).
PcPresentation catalog(const CatalogParams &params);

PcPresentation direct_product(const PcPresentation &left, const PcPresentation &right);

bool is_prime(std::int64_t n);
// Smallest positive integer that is a primitive root mod p.
std::int64_t smallest_primitive_root(std::int64_t p);
// Smallest positive integer that is a quadratic non-residue mod p.
std::int64_t smallest_nonresidue(std::int64_t p);
// Positive s < p with nu*s == 1 (mod p).
std::int64_t inverse_mod(std::int64_t a, std::int64_t p);

// The relations displayed for Phi15/Phi28/Phi29 and the Heisenberg groups,
// checked verbatim as element identities. Returns the failing relations.
std::vector<std::string> verify_defining_relations(const PcGroup &g, const CatalogParams &params);

// Loads "catalog:<ref>" or a DSL file (relative paths against base_dir).
// The catalog parameters are returned through `params` when requested.
std::shared_ptr<const PcGroup> load_group_ref(const std::string &ref, const std::string &base_dir,
                                              CatalogParams *params = nullptr);

std::string read_file(const std::string &path);

} // namespace b0

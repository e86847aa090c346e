#pragma once

// Finite groups given by polycyclic presentations.
//
// Generators g_1..g_n with relative orders m_i. Power relations
// g_i^{m_i} = w_i and commutator relations [g_j, g_i] = w_ij (j > i) have
// right-hand sides in the later generators g_{i+1}..g_n. Commutators are
// [x, y] = x^-1 y^-1 x y throughout. Elements are exponent vectors in
// normal form g_1^{e_1} ... g_n^{e_n}, 0 <= e_i < m_i.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace b0 {

using Element = std::vector<std::int64_t>;

struct Letter {
  std::size_t gen;
  std::int64_t exp;
  bool operator==(const Letter &) const = default;
};
using Word = std::vector<Letter>;

struct PcPresentation {
  std::string name = "G";
  std::vector<std::string> names;
  std::vector<std::int64_t> relative_orders;
  std::vector<Word> power_rhs;                             // one per generator
  std::map<std::pair<std::size_t, std::size_t>, Word> comm_rhs; // key (j, i), j > i

  std::size_t rank() const { return names.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const Word *comm(std::size_t j, std::size_t i) const;

  // Ordering constraint, name uniqueness, orders >= 2, letters in range.
  // Throws UsageError.
  void validate_structure() const;
};

struct ConsistencyReport {
  std::vector<std::string> failures;
  bool consistent() const { return failures.empty(); }
};

class PcGroup {
public:
  // Validates structure and consistency; throws UsageError on failure.
  explicit PcGroup(PcPresentation pres);
  // Structure only. Collection still terminates but normal forms may not be
  // unique; used by the consistency checker.
  static PcGroup unchecked(PcPresentation pres);

  const PcPresentation &presentation() const { return pres_; }
  std::size_t rank() const { return pres_.rank(); }
  std::int64_t relative_order(std::size_t i) const { return pres_.relative_orders[i]; }
  const std::string &name(std::size_t i) const { return pres_.names[i]; }
  // Product of relative orders; throws CapExceeded beyond 2^62.
  std::uint64_t order() const;

  Element identity() const { return Element(rank(), 0); }
  Element generator(std::size_t i) const;
  bool is_identity(const Element &a) const;

  Element multiply(const Element &a, const Element &b) const;
  Element inverse(const Element &a) const;
  Element power(const Element &a, std::int64_t k) const;
  Element commutator(const Element &a, const Element &b) const;
  // b^-1 a b
  Element conjugate(const Element &a, const Element &b) const;
  Element collect(const Word &w) const;
  Element collect(std::string_view word_text) const;

  // Element as a word "a1^2*b" ("1" for the identity).
  std::string format(const Element &a) const;
  Word to_word(const Element &a) const;

  // Mixed-radix rank with g_1 most significant; identity has rank 0.
  std::uint64_t index(const Element &a) const;
  Element element_at(std::uint64_t idx) const;

  // Checks an exponent vector is in range; throws UsageError otherwise.
  void check_element(const Element &a) const;

  ConsistencyReport consistency() const;

private:
  PcGroup(PcPresentation pres, bool check);
  void build_tables();

  // e := e * g_k^c, c >= 1 and e[k+1..] possibly nonzero.
  void mul_gen(Element &e, std::size_t k, std::int64_t c) const;
  void mul_elem(Element &e, const Element &f) const;
  // tail^{g_k^c} for tail supported above k.
  Element conjugate_tail(const Element &tail, std::size_t k, std::int64_t c) const;

  PcPresentation pres_;
  std::vector<Element> pow_nf_;                // normal form of g_i^{m_i}
  std::vector<std::vector<Element>> conj_nf_; // [j][i] = g_j^{g_i}, j > i
  std::vector<Element> inv_gen_;               // g_i^-1
  // [k][c][j] = g_j^{g_k^c}, j > k; empty when the table would be too large.
  std::vector<std::vector<std::vector<Element>>> conj_pow_;
};

ConsistencyReport consistency_check(const PcPresentation &pres);

} // namespace b0

#pragma once

// Triviality certificates: witness pairs claimed to commute, whose wedges
// are added to the relator lattice. A trivial quotient proves B0(G) = 0;
// anything else proves nothing.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "b0/catalog.hpp"
#include "b0/dsl.hpp"
#include "b0/wedge.hpp"

namespace b0 {

inline constexpr const char *kSoundUpperBound = "sound-upper-bound";

struct Certificate {
  std::string group_ref;
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::string expect = "trivial";

  // {"group": ref, "witnesses": [[u, v], ...], "expect": "trivial"}
  static Certificate parse_json(const std::string &text);
};

// Exponent symbols usable in witness words: p, s (nu*s = 1 mod p), nu and g
// (smallest primitive root), taken from the catalog parameters when present.
ExponentSymbols certificate_symbols(const CatalogParams *params);

enum class Verdict { certified_trivial, inconclusive, rejected };
std::string verdict_name(Verdict v);

struct WitnessCheck {
  std::string u_text, v_text;
  Word u, v;
  bool commutes = false;
  std::string commutator; // normal form of [u, v]
};

struct UpperBound {
  zl::AbelianInvariants invariants;
  WedgeResult detail;
  std::string tag = kSoundUpperBound;
};

struct CertificateRun {
  Verdict verdict = Verdict::rejected;
  std::string reason;
  std::vector<WitnessCheck> witnesses;
  std::optional<UpperBound> bound;
  std::unique_ptr<WedgeEngine> engine;
  WedgeLattice lattice;
  std::vector<std::size_t> witness_roots;
};

std::vector<WitnessCheck> check_witnesses(const PcGroup &g, const Certificate &cert,
                                          const ExponentSymbols &symbols);

// Relator lattice plus witness wedges. Throws UsageError when a witness
// pair does not commute.
UpperBound b0_upper_bound(const PcGroup &g, const std::vector<std::pair<Word, Word>> &witnesses);

CertificateRun verify_certificate(const PcGroup &g, const Certificate &cert,
                                  const ExponentSymbols &symbols);

// One JSON object per line: every expansion node (rule tags SPLIT-L,
// SPLIT-R, INV, COMMUTE-ZERO, BASE) followed by the relation roots (RELATOR
// for relator wedges, COMMUTE-ZERO with "root" for commuting pairs).
void write_trace(std::ostream &out, const CertificateRun &run);

struct TraceAudit {
  std::size_t nodes_checked = 0;
  std::size_t roots_checked = 0;
  std::vector<std::string> failures;
  std::uint64_t lattice_order = 0; // |Z^dim / relations|, 0 when infinite
  std::uint64_t derived_order = 0; // |G'|
  bool trivial = false;            // lattice_order == derived_order

  bool ok() const { return failures.empty(); }
};

// Replays a JSON-lines trace against G without the expansion engine: each
// node's element identities and coefficient sums, each root's claim, and
// the verdict |Z^dim / L| = |G'| (the evaluation map is then injective).
TraceAudit check_trace(const PcGroup &g, std::istream &trace);

} // namespace b0

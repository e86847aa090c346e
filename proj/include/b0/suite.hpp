#pragma once

// The acceptance matrix: ten rows reproducing the triviality results for
// the small catalog groups, the Heisenberg and order-p^6 families, Rai's
// central product, and the cross-checks between the engines.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "b0/pcgroup.hpp"

namespace b0 {

struct SuiteOptions {
  std::vector<std::int64_t> phi15_primes{5, 7};
  std::vector<std::int64_t> cert_primes{5, 7};
  std::vector<std::int64_t> fuzz_primes{5, 7};
  // Row ids ("4") or categories: oracle, class2, cert, central-product, expansion.
  std::set<std::string> skip;
  std::uint64_t seed = 20240611;
  std::size_t fuzz_samples = 1000;
  std::string data_dir; // holds certs/, specs/ and groups/
  std::function<void(const std::string &)> log;
};

struct SuiteRow {
  int id = 0;
  std::string name;
  std::vector<std::string> categories;
  bool skipped = false;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<SuiteRow> run_paper_suite(const SuiteOptions &opts);

// B0(G) = 0 by the oracle (|G| within the cap) or the class-2 engine.
// Returns the method used, nullopt when neither applies; throws UsageError
// when B0(G) is nonzero.
std::optional<std::string> verify_b0_trivial(const PcGroup &g);

} // namespace b0

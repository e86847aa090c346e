// Runs the ten acceptance criteria and prints one line per criterion.

#include <cstdio>
#include <iostream>

#include "b0/error.hpp"
#include "b0/suite.hpp"

int main() {
  b0::SuiteOptions opts;
  opts.data_dir = B0_DATA_DIR;
  opts.cert_primes = {5, 7, 11};
  opts.log = [](const std::string &msg) { std::cerr << "  " << msg << '\n'; };
  try {
    bool all = true;
    for (const auto &row : b0::run_paper_suite(opts)) {
      all &= row.pass;
      std::printf("[%s] %2d %-12s %7.2fs  %s\n", row.pass ? "PASS" : "FAIL", row.id,
                  row.name.c_str(), row.seconds, row.detail.c_str());
    }
    std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
    return all ? 0 : 1;
  } catch (const b0::Error &e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    return 1;
  }
}

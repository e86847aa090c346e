#pragma once

// Quadratic scans over enumerated groups. Each kernel has an OpenMP version
// and a serial reference; both return identical results for any thread count.

#include <cstdint>
#include <utility>
#include <vector>

#include "b0/group_table.hpp"

namespace b0::kernels {

using Bitmap = std::vector<std::uint8_t>;

// Membership bitmap of K(G) = {[x, y]}.
Bitmap commutator_set_serial(const GroupTable &g);
Bitmap commutator_set_parallel(const GroupTable &g);

// Membership bitmap of Z(G).
Bitmap center_serial(const GroupTable &g);
Bitmap center_parallel(const GroupTable &g);

// All ordered pairs (x, y) with [x, y] = 1, sorted.
std::vector<std::pair<Id, Id>> commuting_pairs_serial(const GroupTable &g);
std::vector<std::pair<Id, Id>> commuting_pairs_parallel(const GroupTable &g);

int max_threads();

} // namespace b0::kernels

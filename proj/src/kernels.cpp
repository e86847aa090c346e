#include "b0/kernels.hpp"

#include <omp.h>

namespace b0::kernels {

int max_threads() { return omp_get_max_threads(); }

Bitmap commutator_set_serial(const GroupTable &g) {
  const Id n = static_cast<Id>(g.order());
  Bitmap k(n, 0);
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y)
      k[g.commutator(x, y)] = 1;
  return k;
}

Bitmap commutator_set_parallel(const GroupTable &g) {
  const auto n = static_cast<std::int64_t>(g.order());
  Bitmap k(static_cast<std::size_t>(n), 0);
#pragma omp parallel
  {
    Bitmap local(static_cast<std::size_t>(n), 0);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t x = 0; x < n; ++x)
      for (Id y = 0; y < static_cast<Id>(n); ++y)
        local[g.commutator(static_cast<Id>(x), y)] = 1;
#pragma omp critical
    for (std::size_t i = 0; i < local.size(); ++i)
      k[i] |= local[i];
  }
  return k;
}

namespace {

bool central(const GroupTable &g, Id z) {
  for (Id s : g.generators())
    if (g.mul(z, s) != g.mul(s, z))
      return false;
  return true;
}

} // namespace

Bitmap center_serial(const GroupTable &g) {
  Bitmap c(g.order(), 0);
  for (Id z = 0; z < g.order(); ++z)
    c[z] = central(g, z);
  return c;
}

Bitmap center_parallel(const GroupTable &g) {
  const auto n = static_cast<std::int64_t>(g.order());
  Bitmap c(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t z = 0; z < n; ++z)
    c[static_cast<std::size_t>(z)] = central(g, static_cast<Id>(z));
  return c;
}

std::vector<std::pair<Id, Id>> commuting_pairs_serial(const GroupTable &g) {
  std::vector<std::pair<Id, Id>> out;
  const Id n = static_cast<Id>(g.order());
  for (Id x = 0; x < n; ++x)
    for (Id y = 0; y < n; ++y)
      if (g.mul(x, y) == g.mul(y, x))
        out.emplace_back(x, y);
  return out;
}

std::vector<std::pair<Id, Id>> commuting_pairs_parallel(const GroupTable &g) {
  const auto n = static_cast<std::int64_t>(g.order());
  // One bucket per x keeps the concatenation in sorted order.
  std::vector<std::vector<Id>> rows(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t x = 0; x < n; ++x) {
    auto &row = rows[static_cast<std::size_t>(x)];
    for (Id y = 0; y < static_cast<Id>(n); ++y)
      if (g.mul(static_cast<Id>(x), y) == g.mul(y, static_cast<Id>(x)))
        row.push_back(y);
  }
  std::vector<std::pair<Id, Id>> out;
  for (std::size_t x = 0; x < rows.size(); ++x)
    for (Id y : rows[x])
      out.emplace_back(static_cast<Id>(x), y);
  return out;
}

} // namespace b0::kernels

#include "b0/group_table.hpp"

#include <algorithm>

#include "json.hpp"

#include "b0/error.hpp"

namespace b0 {

GroupTable GroupTable::from_pc(std::shared_ptr<const PcGroup> g, std::uint64_t cap) {
  const std::uint64_t n = g->order();
  if (n > cap)
    throw CapExceeded("enumerating " + g->presentation().name, n, cap);
  if (n > UINT32_MAX)
    throw CapExceeded("enumerating " + g->presentation().name, n, UINT32_MAX);
  GroupTable t;
  t.order_ = n;
  t.pc_ = std::move(g);
  const PcGroup &pc = *t.pc_;
  for (std::size_t i = 0; i < pc.rank(); ++i)
    t.gens_.push_back(static_cast<Id>(pc.index(pc.generator(i))));

  if (n <= kCayleyLimit) {
    // right[k][a] = a * g_k; then a*b = right[last(b)][a * pred(b)] where
    // pred(b) lowers the last nonzero exponent of b by one.
    std::vector<std::vector<Id>> right(pc.rank(), std::vector<Id>(n));
    for (std::uint64_t a = 0; a < n; ++a) {
      const Element ea = pc.element_at(a);
      for (std::size_t k = 0; k < pc.rank(); ++k)
        right[k][a] = static_cast<Id>(pc.index(pc.multiply(ea, pc.generator(k))));
    }
    std::vector<Id> pred(n, 0);
    std::vector<std::size_t> last(n, 0);
    for (std::uint64_t b = 1; b < n; ++b) {
      Element e = pc.element_at(b);
      std::size_t k = e.size();
      while (e[k - 1] == 0)
        --k;
      last[b] = k - 1;
      e[k - 1] -= 1;
      pred[b] = static_cast<Id>(pc.index(e));
    }
    t.cayley_.assign(n * n, 0);
    for (std::uint64_t a = 0; a < n; ++a) {
      Id *row = &t.cayley_[a * n];
      row[0] = static_cast<Id>(a);
      // pred(b) < b, so the row fills left to right.
      for (std::uint64_t b = 1; b < n; ++b)
        row[b] = right[last[b]][row[pred[b]]];
    }
  }
  t.inv_.resize(n);
  for (std::uint64_t a = 0; a < n; ++a)
    t.inv_[a] = static_cast<Id>(pc.index(pc.inverse(pc.element_at(a))));
  return t;
}

GroupTable GroupTable::from_cayley(std::vector<std::vector<Id>> table) {
  const std::size_t n = table.size();
  if (n == 0)
    throw UsageError("multiplication table is empty");
  GroupTable t;
  t.order_ = n;
  t.cayley_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n)
      throw UsageError("multiplication table is not square");
    std::vector<bool> seen(n, false);
    for (std::size_t b = 0; b < n; ++b) {
      const Id x = table[a][b];
      if (x >= n)
        throw UsageError("multiplication table entry out of range");
      if (seen[x])
        throw UsageError("multiplication table row " + std::to_string(a) + " repeats an entry");
      seen[x] = true;
      t.cayley_[a * n + b] = x;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    if (t.mul(0, static_cast<Id>(a)) != a || t.mul(static_cast<Id>(a), 0) != a)
      throw UsageError("element 0 is not the identity of the table");
  t.inv_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < n && !found; ++b)
      if (t.mul(static_cast<Id>(a), static_cast<Id>(b)) == 0) {
        t.inv_[a] = static_cast<Id>(b);
        found = true;
      }
    if (!found)
      throw UsageError("element " + std::to_string(a) + " has no inverse");
  }
  // Generators: greedily add the smallest element outside the closure.
  std::vector<bool> in(n, false);
  in[0] = true;
  for (std::size_t cand = 1; cand < n; ++cand) {
    if (in[cand])
      continue;
    t.gens_.push_back(static_cast<Id>(cand));
    std::fill(in.begin(), in.end(), false);
    in[0] = true;
    std::vector<Id> queue{0};
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (Id s : t.gens_) {
        const Id y = t.mul(queue[q], s);
        if (!in[y]) {
          in[y] = true;
          queue.push_back(y);
        }
      }
  }
  // Light's test: associativity against a generating set suffices.
  for (Id s : t.gens_)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (t.mul(t.mul(static_cast<Id>(a), static_cast<Id>(b)), s) !=
            t.mul(static_cast<Id>(a), t.mul(static_cast<Id>(b), s)))
          throw UsageError("multiplication table is not associative");
  return t;
}

GroupTable GroupTable::parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(std::string("malformed table JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("order") || !j.contains("table"))
    throw UsageError("table JSON needs \"order\" and \"table\"");
  const auto n = j.at("order").get<std::size_t>();
  std::vector<std::vector<Id>> rows;
  try {
    rows = j.at("table").get<std::vector<std::vector<Id>>>();
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(std::string("malformed table JSON: ") + e.what());
  }
  if (rows.size() != n)
    throw UsageError("table size does not match \"order\"");
  return from_cayley(std::move(rows));
}

Id GroupTable::mul(Id a, Id b) const {
  if (!cayley_.empty())
    return cayley_[static_cast<std::size_t>(a) * order_ + b];
  return static_cast<Id>(pc_->index(pc_->multiply(pc_->element_at(a), pc_->element_at(b))));
}

Id GroupTable::power(Id a, std::int64_t k) const {
  Id base = k < 0 ? inv(a) : a;
  std::uint64_t m = k < 0 ? 0 - static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
  Id res = 0;
  while (m != 0) {
    if (m & 1)
      res = mul(res, base);
    base = mul(base, base);
    m >>= 1;
  }
  return res;
}

std::size_t GroupTable::element_order(Id a) const {
  std::size_t k = 1;
  for (Id x = a; x != 0; x = mul(x, a))
    ++k;
  return k;
}

Element GroupTable::element(Id a) const {
  if (!pc_)
    throw UsageError("table is not backed by a pc presentation");
  return pc_->element_at(a);
}

Id GroupTable::id_of(const Element &e) const {
  if (!pc_)
    throw UsageError("table is not backed by a pc presentation");
  pc_->check_element(e);
  return static_cast<Id>(pc_->index(e));
}

std::string GroupTable::label(Id a) const {
  return pc_ ? pc_->format(pc_->element_at(a)) : "e" + std::to_string(a);
}

std::string GroupTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < order_; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < order_; ++b)
      row.push_back(mul(static_cast<Id>(a), static_cast<Id>(b)));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"order", order_}, {"table", rows}}.dump();
}

} // namespace b0

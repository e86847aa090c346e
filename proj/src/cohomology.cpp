#include "b0/cohomology.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <string>

#include "b0/error.hpp"

namespace b0 {

namespace {

using zl::ModRow;
using zl::ModRows;

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  const std::uint64_t s = a + b;
  return s >= n ? s - n : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return a >= b ? a - b : a + n - b;
}

// Closure of gens inside g, as a membership bitmap over ambient ids.
std::vector<bool> closure_bits(const GroupTable &g, const std::vector<Id> &gens) {
  std::vector<bool> in(g.order(), false);
  in[0] = true;
  std::deque<Id> queue{0};
  while (!queue.empty()) {
    const Id x = queue.front();
    queue.pop_front();
    for (Id s : gens) {
      const Id y = g.mul(x, s);
      if (!in[y]) {
        in[y] = true;
        queue.push_back(y);
      }
    }
  }
  return in;
}

// Greedy small generating set of a, preferring a.gens.
std::vector<Id> small_generating_set(const GroupTable &g, const Subgroup &a) {
  std::vector<Id> cand = a.gens;
  cand.insert(cand.end(), a.members.begin(), a.members.end());
  std::vector<Id> out;
  std::vector<bool> in = closure_bits(g, out);
  std::size_t reached = 1;
  for (Id x : cand) {
    if (reached == a.order())
      break;
    if (in[x])
      continue;
    out.push_back(x);
    in = closure_bits(g, out);
    reached = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
  }
  return out;
}

} // namespace

std::uint64_t oracle_cap() {
  const char *env = std::getenv("B0_ORACLE_CAP");
  if (!env || !*env)
    return kOracleDefaultCap;
  try {
    const auto v = std::stoull(env);
    return std::min<std::uint64_t>(v, kOracleHardCap);
  } catch (const std::exception &) {
    throw UsageError(std::string("B0_ORACLE_CAP: expected an integer, got '") + env + "'");
  }
}

bool is_normalized_cocycle(const GroupTable &g, const Cocycle &c) {
  const std::size_t k = c.elements.size();
  const std::uint64_t n = c.modulus;
  std::vector<std::int64_t> local(g.order(), -1);
  for (std::size_t i = 0; i < k; ++i)
    local[c.elements[i]] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < k; ++i)
    if (c.at(0, i) != 0 || c.at(i, 0) != 0)
      return false;
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) {
      const auto xy = static_cast<std::size_t>(local[g.mul(c.elements[x], c.elements[y])]);
      for (std::size_t z = 0; z < k; ++z) {
        const auto yz = static_cast<std::size_t>(local[g.mul(c.elements[y], c.elements[z])]);
        if (add_mod(c.at(x, y), c.at(xy, z), n) != add_mod(c.at(y, z), c.at(x, yz), n))
          return false;
      }
    }
  return true;
}

std::vector<Id> H2Presentation::generators() const {
  std::vector<Id> out;
  for (auto s : gens_)
    out.push_back(elems_[s]);
  return out;
}

zl::AbelianInvariants H2Presentation::h2() const {
  ModRows rels = coboundaries_;
  rels.insert(rels.end(), bockstein_.begin(), bockstein_.end());
  return zl::subquotient_invariants_mod(cocycles_, rels, coordinate_count(), n_);
}

Cocycle H2Presentation::expand(const ModRow &coords) const {
  const std::size_t k = elems_.size(), m = gens_.size();
  Cocycle c;
  c.modulus = n_;
  c.elements = elems_;
  c.values.assign(k * k, 0);
  const auto col = [&](std::size_t x, std::size_t s) -> std::uint64_t {
    return x == 0 ? 0 : coords[(x - 1) * m + s];
  };
  const auto mul = [&](std::size_t a, std::size_t b) {
    return static_cast<std::size_t>(local_[g_->mul(elems_[a], elems_[b])]);
  };
  // c(x, y's) = c(x, y') + c(xy', s) - c(y', s) along the tree.
  for (std::size_t t = 1; t < bfs_.size(); ++t) {
    const std::size_t y = bfs_[t];
    const auto [yp, s] = parent_[y];
    for (std::size_t x = 1; x < k; ++x) {
      const std::uint64_t v =
          add_mod(c.values[x * k + yp], sub_mod(col(mul(x, yp), s), col(yp, s), n_), n_);
      c.values[x * k + y] = v;
    }
  }
  return c;
}

ModRow H2Presentation::coordinates(const Cocycle &c) const {
  if (c.elements != elems_ || c.modulus != n_)
    throw UsageError("cocycle is not defined on this group or modulus");
  const std::size_t m = gens_.size();
  ModRow out(coordinate_count());
  for (std::size_t x = 1; x < elems_.size(); ++x)
    for (std::size_t s = 0; s < m; ++s)
      out[(x - 1) * m + s] = c.at(x, gens_[s]);
  return out;
}

bool H2Presentation::contains(const Cocycle &c, bool with_bockstein) const {
  zl::HowellBasis basis(coordinate_count(), n_);
  for (const auto &r : coboundaries_)
    basis.insert(r);
  if (with_bockstein)
    for (const auto &r : bockstein_)
      basis.insert(r);
  return basis.contains(coordinates(c));
}

H2Presentation h2_mod(const GroupTable &g, std::uint64_t n) { return h2_mod(g, whole_group(g), n); }

H2Presentation h2_mod(const GroupTable &g, const Subgroup &a, std::uint64_t n) {
  const std::size_t k = a.order();
  if (k > kOracleHardCap)
    throw CapExceeded("the cocycle oracle on a group of order " + std::to_string(k), k,
                      kOracleHardCap);
  if (n == 0 || n % k != 0)
    throw UsageError("coefficient modulus " + std::to_string(n) + " is not a multiple of |G| = " +
                     std::to_string(k));
  H2Presentation p;
  p.g_ = &g;
  p.n_ = n;
  p.elems_ = a.members;
  B0_ASSERT(!p.elems_.empty() && p.elems_[0] == 0, "subgroup must list the identity first");
  p.local_.assign(g.order(), -1);
  for (std::size_t i = 0; i < k; ++i)
    p.local_[p.elems_[i]] = static_cast<std::int64_t>(i);
  for (Id s : small_generating_set(g, a))
    p.gens_.push_back(static_cast<std::size_t>(p.local_[s]));
  const std::size_t m = p.gens_.size();
  const std::size_t coords = p.coordinate_count();
  const auto mul = [&](std::size_t x, std::size_t y) {
    return static_cast<std::size_t>(p.local_[g.mul(p.elems_[x], p.elems_[y])]);
  };

  // Spanning tree of the Cayley graph, root = identity.
  p.parent_.assign(k, {0, 0});
  std::vector<bool> seen(k, false);
  seen[0] = true;
  p.bfs_.push_back(0);
  std::vector<std::pair<std::size_t, std::size_t>> non_tree; // (y', s)
  for (std::size_t t = 0; t < p.bfs_.size(); ++t) {
    const std::size_t y = p.bfs_[t];
    for (std::size_t s = 0; s < m; ++s) {
      const std::size_t z = mul(y, p.gens_[s]);
      if (!seen[z]) {
        seen[z] = true;
        p.parent_[z] = {y, s};
        p.bfs_.push_back(z);
      } else {
        non_tree.emplace_back(y, s);
      }
    }
  }
  B0_ASSERT(p.bfs_.size() == k, "generating set does not generate");

  // Linear forms F[x][y] of c(x, y) in the generator-column coordinates.
  std::vector<ModRow> f(k * k, ModRow(coords, 0));
  const auto col_index = [&](std::size_t x, std::size_t s) { return (x - 1) * m + s; };
  const auto add_col = [&](ModRow &r, std::size_t x, std::size_t s, bool neg) {
    if (x == 0)
      return;
    auto &e = r[col_index(x, s)];
    e = neg ? sub_mod(e, 1, n) : add_mod(e, 1, n);
  };
  for (std::size_t t = 1; t < k; ++t) {
    const std::size_t y = p.bfs_[t];
    const auto [yp, s] = p.parent_[y];
    for (std::size_t x = 1; x < k; ++x) {
      ModRow r = f[x * k + yp];
      add_col(r, mul(x, yp), s, false);
      add_col(r, yp, s, true);
      f[x * k + y] = std::move(r);
    }
  }

  // Every non-tree edge must reproduce the tree value.
  ModRows constraints;
  for (const auto &[yp, s] : non_tree) {
    const std::size_t y = mul(yp, p.gens_[s]);
    for (std::size_t x = 1; x < k; ++x) {
      ModRow r = f[x * k + y];
      const auto &base = f[x * k + yp];
      for (std::size_t i = 0; i < coords; ++i)
        r[i] = sub_mod(r[i], base[i], n);
      add_col(r, mul(x, yp), s, true);
      add_col(r, yp, s, false);
      if (std::any_of(r.begin(), r.end(), [](std::uint64_t v) { return v != 0; }))
        constraints.push_back(std::move(r));
    }
  }
  std::sort(constraints.begin(), constraints.end());
  constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
  f.clear();
  f.shrink_to_fit();
  p.cocycles_ = zl::kernel_mod(constraints, coords, n);

  // Coboundaries of the point functions e_h, h != 1.
  for (std::size_t h = 1; h < k; ++h) {
    ModRow r(coords, 0);
    for (std::size_t x = 1; x < k; ++x)
      for (std::size_t s = 0; s < m; ++s) {
        std::uint64_t v = 0;
        if (x == h)
          v = add_mod(v, 1, n);
        if (p.gens_[s] == h)
          v = add_mod(v, 1, n);
        if (mul(x, p.gens_[s]) == h)
          v = sub_mod(v, 1, n);
        r[col_index(x, s)] = v;
      }
    p.coboundaries_.push_back(std::move(r));
  }

  // Homomorphisms G -> Z/n along the tree, then their Bockstein cocycles
  // beta(x, y) = (a(x) + a(y) - a(xy)) / n with representatives in [0, n).
  std::vector<ModRow> word(k, ModRow(m, 0));
  for (std::size_t t = 1; t < k; ++t) {
    const std::size_t y = p.bfs_[t];
    const auto [yp, s] = p.parent_[y];
    word[y] = word[yp];
    word[y][s] = add_mod(word[y][s], 1, n);
  }
  ModRows hom_rels;
  for (const auto &[yp, s] : non_tree) {
    const std::size_t y = mul(yp, p.gens_[s]);
    ModRow r(m);
    for (std::size_t i = 0; i < m; ++i)
      r[i] = sub_mod(word[yp][i], word[y][i], n);
    r[s] = add_mod(r[s], 1, n);
    hom_rels.push_back(std::move(r));
  }
  for (const auto &h : zl::kernel_mod(hom_rels, m, n)) {
    std::vector<std::uint64_t> val(k, 0);
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t i = 0; i < m; ++i)
        val[x] = add_mod(val[x], zl::mul_mod(word[x][i], h[i], n), n);
    ModRow r(coords, 0);
    bool nonzero = false;
    for (std::size_t x = 1; x < k; ++x)
      for (std::size_t s = 0; s < m; ++s) {
        const std::uint64_t carry = val[x] + val[p.gens_[s]] >= n ? 1 : 0;
        r[col_index(x, s)] = carry;
        nonzero |= carry != 0;
      }
    if (nonzero)
      p.bockstein_.push_back(std::move(r));
  }
  return p;
}

Cocycle restrict_class(const GroupTable &g, const Subgroup &a, const Cocycle &c) {
  std::vector<std::int64_t> local(g.order(), -1);
  for (std::size_t i = 0; i < c.elements.size(); ++i)
    local[c.elements[i]] = static_cast<std::int64_t>(i);
  Cocycle out;
  out.modulus = c.modulus;
  out.elements = a.members;
  const std::size_t k = a.order();
  out.values.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto li = local[a.members[i]];
    if (li < 0)
      throw UsageError("restriction target is not contained in the cocycle's domain");
    for (std::size_t j = 0; j < k; ++j) {
      const auto lj = local[a.members[j]];
      if (lj < 0)
        throw UsageError("restriction target is not contained in the cocycle's domain");
      out.values[i * k + j] = c.at(static_cast<std::size_t>(li), static_cast<std::size_t>(lj));
    }
  }
  // Closure under multiplication is what makes the restriction a cocycle.
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!a.contains(g.mul(a.members[i], a.members[j])))
        throw UsageError("restriction target is not a subgroup");
  return out;
}

OracleResult b0_oracle(const GroupTable &g, SubgroupMode mode, std::uint64_t n,
                       std::uint64_t cap) {
  if (cap == 0)
    cap = oracle_cap();
  cap = std::min(cap, kOracleHardCap);
  if (g.order() > cap)
    throw CapExceeded("the cocycle oracle on a group of order " + std::to_string(g.order()),
                      g.order(), cap);
  if (n == 0)
    n = g.order();
  OracleResult out;
  out.modulus = n;
  const H2Presentation pg = h2_mod(g, n);
  const std::size_t coords = pg.coordinate_count();
  out.h2 = pg.h2();

  // Representatives z_1..z_r of Z^2 modulo C = B^2 + Bockstein.
  zl::HowellBasis cbasis(coords, n);
  for (const auto &r : pg.coboundaries())
    cbasis.insert(r);
  for (const auto &r : pg.bockstein())
    cbasis.insert(r);
  zl::HowellBasis rbasis(coords, n);
  for (ModRow z : pg.cocycles()) {
    if (!cbasis.reduce(z))
      rbasis.insert(std::move(z));
  }
  const ModRows reps = rbasis.rows();
  const std::size_t r = reps.size();
  if (r == 0) {
    out.b0 = zl::AbelianInvariants::trivial();
    return out;
  }

  // L = {lambda : sum lambda_i z_i in C}.
  const ModRows crows = cbasis.rows();
  ModRows lsys(coords, ModRow(r + crows.size(), 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < coords; ++c)
      lsys[c][i] = reps[i][c];
  for (std::size_t j = 0; j < crows.size(); ++j)
    for (std::size_t c = 0; c < coords; ++c)
      lsys[c][r + j] = (n - crows[j][c]) % n;
  ModRows lgens;
  for (const auto &v : zl::kernel_mod(lsys, r + crows.size(), n))
    lgens.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r));

  std::vector<Cocycle> tables;
  for (const auto &z : reps)
    tables.push_back(pg.expand(z));

  const std::vector<Subgroup> family =
      mode == SubgroupMode::abelian ? maximal_abelian_subgroups(g) : bicyclic_subgroups(g);
  out.subgroups_checked = family.size();

  // S (in lambda coordinates) shrinks with every subgroup.
  ModRows sgens;
  for (std::size_t i = 0; i < r; ++i) {
    ModRow e(r, 0);
    e[i] = 1;
    sgens.push_back(std::move(e));
  }
  for (const auto &a : family) {
    if (sgens.empty())
      break;
    const H2Presentation pa = h2_mod(g, a, n);
    const std::size_t ac = pa.coordinate_count();
    if (ac == 0)
      continue;
    ModRows w = pa.coboundaries();
    w.insert(w.end(), pa.bockstein().begin(), pa.bockstein().end());
    // Restriction coordinates of each z_i, then of each S generator.
    std::vector<ModRow> res_z;
    for (const auto &t : tables)
      res_z.push_back(pa.coordinates(restrict_class(g, a, t)));
    const std::size_t cols = sgens.size() + w.size();
    ModRows sys(ac, ModRow(cols, 0));
    for (std::size_t j = 0; j < sgens.size(); ++j)
      for (std::size_t c = 0; c < ac; ++c) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < r; ++i)
          v = add_mod(v, zl::mul_mod(sgens[j][i], res_z[i][c], n), n);
        sys[c][j] = v;
      }
    for (std::size_t j = 0; j < w.size(); ++j)
      for (std::size_t c = 0; c < ac; ++c)
        sys[c][sgens.size() + j] = (n - w[j][c]) % n;
    zl::HowellBasis next(r, n);
    for (const auto &mu : zl::kernel_mod(sys, cols, n)) {
      ModRow v(r, 0);
      for (std::size_t j = 0; j < sgens.size(); ++j)
        if (mu[j])
          for (std::size_t i = 0; i < r; ++i)
            v[i] = add_mod(v[i], zl::mul_mod(mu[j], sgens[j][i], n), n);
      next.insert(std::move(v));
    }
    sgens = next.rows();
  }
  out.b0 = zl::subquotient_invariants_mod(sgens, lgens, r, n);
  return out;
}

} // namespace b0

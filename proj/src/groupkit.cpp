#include "b0/groupkit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <boost/dynamic_bitset.hpp>

#include "b0/error.hpp"
#include "b0/pc_subgroup.hpp"

namespace b0 {

bool Subgroup::contains(Id x) const {
  return std::binary_search(members.begin(), members.end(), x);
}

GroupTable enumerate(std::shared_ptr<const PcGroup> g, std::uint64_t cap) {
  return GroupTable::from_pc(std::move(g), cap);
}

Subgroup trivial_subgroup() { return Subgroup{{0}, {}}; }

Subgroup whole_group(const GroupTable &g) {
  Subgroup s;
  s.members.resize(g.order());
  for (std::size_t i = 0; i < g.order(); ++i)
    s.members[i] = static_cast<Id>(i);
  s.gens = g.generators();
  return s;
}

namespace {

Subgroup closure_from(const GroupTable &g, std::vector<Id> gens, bool normal) {
  std::vector<bool> in(g.order(), false);
  std::vector<Id> queue{0};
  in[0] = true;
  std::size_t processed = 0;
  // Gens grow when taking the normal closure.
  for (;;) {
    for (; processed < queue.size(); ++processed)
      for (Id s : gens) {
        const Id y = g.mul(queue[processed], s);
        if (!in[y]) {
          in[y] = true;
          queue.push_back(y);
        }
      }
    if (!normal)
      break;
    std::vector<Id> extra;
    for (Id s : gens)
      for (Id t : g.generators()) {
        const Id c = g.conj(s, t);
        if (!in[c] && std::find(extra.begin(), extra.end(), c) == extra.end())
          extra.push_back(c);
      }
    if (extra.empty())
      break;
    gens.insert(gens.end(), extra.begin(), extra.end());
    processed = 0;
  }
  Subgroup out;
  out.members = std::move(queue);
  std::sort(out.members.begin(), out.members.end());
  // Keep only generators that enlarge the group.
  std::vector<bool> cur(g.order(), false);
  cur[0] = true;
  std::vector<Id> members{0};
  for (Id s : gens) {
    if (cur[s])
      continue;
    out.gens.push_back(s);
    std::fill(cur.begin(), cur.end(), false);
    cur[0] = true;
    members.assign(1, 0);
    for (std::size_t q = 0; q < members.size(); ++q)
      for (Id t : out.gens) {
        const Id y = g.mul(members[q], t);
        if (!cur[y]) {
          cur[y] = true;
          members.push_back(y);
        }
      }
  }
  return out;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      ps.push_back(q);
      while (n % q == 0)
        n /= q;
    }
  if (n > 1)
    ps.push_back(n);
  return ps;
}

} // namespace

Subgroup subgroup_closure(const GroupTable &g, const std::vector<Id> &gens) {
  for (Id s : gens)
    if (s >= g.order())
      throw UsageError("subgroup generator out of range");
  return closure_from(g, gens, false);
}

Subgroup normal_closure(const GroupTable &g, const std::vector<Id> &gens) {
  for (Id s : gens)
    if (s >= g.order())
      throw UsageError("subgroup generator out of range");
  return closure_from(g, gens, true);
}

bool is_normal(const GroupTable &g, const Subgroup &h) {
  for (Id x : h.members)
    for (Id t : g.generators())
      if (!h.contains(g.conj(x, t)))
        return false;
  return true;
}

Subgroup intersection(const Subgroup &a, const Subgroup &b) {
  Subgroup out;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(out.members));
  out.gens = out.members;
  return out;
}

kernels::Bitmap commutator_set(const GroupTable &g) { return kernels::commutator_set_parallel(g); }

Subgroup derived_subgroup(const GroupTable &g) {
  std::vector<Id> comms;
  const auto &gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      comms.push_back(g.commutator(gens[i], gens[j]));
  return normal_closure(g, comms);
}

Subgroup center(const GroupTable &g) {
  const auto bits = kernels::center_parallel(g);
  std::vector<Id> members;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i])
      members.push_back(static_cast<Id>(i));
  return subgroup_closure(g, members);
}

bool is_commutator_closed(const GroupTable &g) {
  const auto k = commutator_set(g);
  const auto d = derived_subgroup(g);
  std::size_t count = 0;
  for (auto b : k)
    count += b;
  return count == d.order();
}

bool is_abelian(const GroupTable &g) {
  const auto &gens = g.generators();
  for (Id s : gens)
    for (Id t : gens)
      if (g.mul(s, t) != g.mul(t, s))
        return false;
  return true;
}

std::vector<std::pair<Id, Id>> commuting_pairs_exhaustive(const GroupTable &g) {
  return kernels::commuting_pairs_parallel(g);
}

std::size_t central_tail_start(const PcGroup &g) {
  std::size_t s = g.rank();
  while (s > 0) {
    const Element x = g.generator(s - 1);
    bool central = true;
    for (std::size_t k = 0; k < g.rank() && central; ++k)
      central = g.is_identity(g.commutator(x, g.generator(k)));
    if (!central)
      break;
    --s;
  }
  return s;
}

namespace {

// Alternating forms B_k with [x, y] = 1 iff x^T B_k y == 0 (mod d_k) for
// every k, on the exponent vectors of the first s generators (class 2).
struct CommutatorForms {
  std::vector<std::int64_t> moduli;
  std::vector<std::vector<std::vector<std::int64_t>>> forms;
};

CommutatorForms commutator_forms(const PcGroup &g, std::size_t s) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Element> images;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      pairs.emplace_back(i, j);
      images.push_back(g.commutator(g.generator(i), g.generator(j)));
    }
  const std::size_t dim = pairs.size();
  CommutatorForms out;
  if (dim == 0)
    return out;
  // Kernel of Z^dim -> G' from Schreier vectors of a BFS over the image.
  std::map<Element, std::size_t> index{{g.identity(), 0}};
  std::vector<Element> elems{g.identity()};
  std::vector<std::vector<std::int64_t>> tree{std::vector<std::int64_t>(dim, 0)};
  std::vector<std::vector<std::int64_t>> kernel;
  for (std::size_t t = 0; t < elems.size(); ++t)
    for (std::size_t k = 0; k < dim; ++k) {
      const Element y = g.multiply(elems[t], images[k]);
      auto w = tree[t];
      w[k] += 1;
      const auto it = index.find(y);
      if (it == index.end()) {
        index[y] = elems.size();
        elems.push_back(y);
        tree.push_back(std::move(w));
      } else {
        for (std::size_t c = 0; c < dim; ++c)
          w[c] -= tree[it->second][c];
        kernel.push_back(std::move(w));
      }
    }
  const auto snf = zl::smith_normal_form(zl::IntMatrix::from_rows(kernel, dim));
  const auto diag = snf.diagonal();
  for (std::size_t k = 0; k < dim; ++k) {
    const zl::Integer d = k < diag.size() ? diag[k] : zl::Integer(0);
    B0_ASSERT(d != 0, "derived subgroup must be finite");
    if (d == 1)
      continue;
    out.moduli.push_back(static_cast<std::int64_t>(d));
    std::vector<std::vector<std::int64_t>> b(s, std::vector<std::int64_t>(s, 0));
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const auto [i, j] = pairs[idx];
      const auto v = static_cast<std::int64_t>(((snf.V(idx, k) % d) + d) % d);
      b[i][j] = v;
      b[j][i] = (static_cast<std::int64_t>(d) - v) % static_cast<std::int64_t>(d);
    }
    out.forms.push_back(std::move(b));
  }
  return out;
}

} // namespace

BilinearPairs commuting_pairs_bilinear(const PcGroup &g, std::uint64_t cap) {
  if (nilpotency_class_pc(g) > 2)
    throw UsageError("bilinear commuting pairs require nilpotency class <= 2");
  BilinearPairs out;
  out.central_start = central_tail_start(g);
  for (std::size_t i = 0; i < g.rank(); ++i) {
    if (i < out.central_start)
      out.transversal_size *= static_cast<std::uint64_t>(g.relative_order(i));
    else
      out.tail_order *= static_cast<std::uint64_t>(g.relative_order(i));
  }
  if (out.transversal_size > cap)
    throw CapExceeded("bilinear transversal", out.transversal_size, cap);
  std::vector<Element> t;
  t.reserve(out.transversal_size);
  for (std::uint64_t idx = 0; idx < out.transversal_size; ++idx) {
    Element e = g.identity();
    std::uint64_t r = idx;
    for (std::size_t i = out.central_start; i-- > 0;) {
      const auto m = static_cast<std::uint64_t>(g.relative_order(i));
      e[i] = static_cast<std::int64_t>(r % m);
      r /= m;
    }
    t.push_back(std::move(e));
  }
  // [t_a, t_b] is bilinear in the exponent vectors; test it through the
  // coordinate functionals of G'.
  const CommutatorForms forms = commutator_forms(g, out.central_start);
  const std::size_t s = out.central_start;
  const auto n = static_cast<std::int64_t>(t.size());
  std::vector<std::vector<std::uint32_t>> rows(t.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t a = 0; a < n; ++a) {
    std::vector<std::vector<std::int64_t>> r(forms.moduli.size(), std::vector<std::int64_t>(s, 0));
    for (std::size_t k = 0; k < forms.moduli.size(); ++k)
      for (std::size_t j = 0; j < s; ++j) {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < s; ++i)
          acc = (acc + t[a][i] * forms.forms[k][i][j]) % forms.moduli[k];
        r[k][j] = acc;
      }
    for (std::int64_t b = 0; b < n; ++b) {
      bool commute = true;
      for (std::size_t k = 0; k < r.size() && commute; ++k) {
        std::int64_t acc = 0;
        for (std::size_t j = 0; j < s; ++j)
          acc += r[k][j] * t[b][j];
        commute = acc % forms.moduli[k] == 0;
      }
      if (commute)
        rows[a].push_back(static_cast<std::uint32_t>(b));
    }
  }
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (auto b : rows[a])
      out.pairs.emplace_back(t[a], t[b]);
  return out;
}

std::vector<Subgroup> bicyclic_subgroups(const GroupTable &g) {
  std::set<std::vector<Id>> seen;
  std::vector<Subgroup> out;
  const Id n = static_cast<Id>(g.order());
  std::vector<bool> in(n, false);
  for (Id x = 0; x < n; ++x)
    for (Id y = x; y < n; ++y) {
      if (g.mul(x, y) != g.mul(y, x))
        continue;
      // <x, y> = {x^i y^j}.
      std::vector<Id> members;
      std::fill(in.begin(), in.end(), false);
      Id xi = 0;
      do {
        Id v = xi;
        do {
          if (!in[v]) {
            in[v] = true;
            members.push_back(v);
          }
          v = g.mul(v, y);
        } while (v != xi);
        xi = g.mul(xi, x);
      } while (xi != 0);
      std::sort(members.begin(), members.end());
      if (seen.insert(members).second) {
        Subgroup s;
        s.members = std::move(members);
        if (x != 0)
          s.gens.push_back(x);
        if (y != 0 && y != x)
          s.gens.push_back(y);
        out.push_back(std::move(s));
      }
    }
  std::sort(out.begin(), out.end(), [](const Subgroup &a, const Subgroup &b) {
    return a.order() != b.order() ? a.order() < b.order() : a.members < b.members;
  });
  return out;
}

std::vector<Subgroup> maximal_abelian_subgroups(const GroupTable &g) {
  using Bits = boost::dynamic_bitset<>;
  const std::size_t n = g.order();
  const auto zbits = kernels::center_parallel(g);
  std::vector<Id> vertices;
  for (std::size_t x = 0; x < n; ++x)
    if (!zbits[x])
      vertices.push_back(static_cast<Id>(x));
  const std::size_t v = vertices.size();
  std::vector<Bits> adj(v, Bits(v));
  for (std::size_t a = 0; a < v; ++a)
    for (std::size_t b = 0; b < v; ++b)
      if (a != b && g.mul(vertices[a], vertices[b]) == g.mul(vertices[b], vertices[a]))
        adj[a].set(b);

  std::vector<Bits> cliques;
  // Bron-Kerbosch with pivoting.
  std::function<void(Bits, Bits, Bits)> bk = [&](Bits r, Bits p, Bits x) {
    if (p.none() && x.none()) {
      cliques.push_back(r);
      return;
    }
    std::size_t pivot = (p | x).find_first(), best = 0;
    for (auto u = (p | x).find_first(); u != Bits::npos; u = (p | x).find_next(u)) {
      const auto c = (p & adj[u]).count();
      if (c >= best) {
        best = c;
        pivot = u;
      }
    }
    const Bits cand = p - adj[pivot];
    for (auto w = cand.find_first(); w != Bits::npos; w = cand.find_next(w)) {
      Bits r2 = r;
      r2.set(w);
      bk(r2, p & adj[w], x & adj[w]);
      p.reset(w);
      x.set(w);
    }
  };
  Bits all(v);
  all.set();
  bk(Bits(v), all, Bits(v));

  std::vector<Subgroup> out;
  for (const auto &c : cliques) {
    std::vector<Id> gens;
    for (auto i = c.find_first(); i != Bits::npos; i = c.find_next(i))
      gens.push_back(vertices[i]);
    for (std::size_t z = 0; z < n; ++z)
      if (zbits[z])
        gens.push_back(static_cast<Id>(z));
    auto s = subgroup_closure(g, gens);
    B0_ASSERT(s.order() == gens.size(), "maximal commuting set is not a subgroup");
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup &a, const Subgroup &b) {
    return a.members < b.members;
  });
  return out;
}

int nilpotency_class(const PcGroup &g) { return nilpotency_class_pc(g); }

int nilpotency_class(const GroupTable &g) {
  Subgroup cur = whole_group(g);
  int c = 0;
  while (cur.order() > 1) {
    std::vector<Id> comms;
    for (Id x : cur.gens.empty() ? cur.members : cur.gens)
      for (Id s : g.generators())
        comms.push_back(g.commutator(x, s));
    Subgroup next = normal_closure(g, comms);
    if (next.order() == cur.order())
      throw UsageError("group is not nilpotent");
    cur = std::move(next);
    ++c;
  }
  return c;
}

Abelianization abelianization(const PcGroup &g) {
  const std::size_t n = g.rank();
  const auto &pres = g.presentation();
  std::vector<std::vector<std::int64_t>> rows;
  auto exps = [&](const Word &w) {
    std::vector<std::int64_t> v(n, 0);
    for (const auto &l : w)
      v[l.gen] += l.exp;
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    auto v = exps(pres.power_rhs[i]);
    for (auto &x : v)
      x = -x;
    v[i] += pres.relative_orders[i];
    rows.push_back(std::move(v));
  }
  for (const auto &[key, w] : pres.comm_rhs)
    rows.push_back(exps(w));
  const auto m = zl::IntMatrix::from_rows(rows, n);
  const auto snf = zl::smith_normal_form(m);
  const auto diag = snf.diagonal();
  Abelianization out;
  std::vector<std::size_t> kept;
  std::vector<zl::Integer> orders;
  for (std::size_t t = 0; t < n; ++t) {
    const zl::Integer d = t < diag.size() ? diag[t] : zl::Integer(0);
    B0_ASSERT(d != 0, "finite pc group has infinite abelianization");
    if (d != 1) {
      kept.push_back(t);
      orders.push_back(d);
    }
  }
  out.invariants = zl::AbelianInvariants::from_cyclic_orders(orders);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<zl::Integer> img;
    for (std::size_t idx = 0; idx < kept.size(); ++idx) {
      zl::Integer x = snf.V(k, kept[idx]) % orders[idx];
      if (x < 0)
        x += orders[idx];
      img.push_back(x);
    }
    out.generator_images.push_back(std::move(img));
  }
  return out;
}

zl::AbelianInvariants quotient_invariants(const GroupTable &g, const Subgroup &a,
                                          const Subgroup &b) {
  for (Id x : b.members)
    B0_ASSERT(a.contains(x), "quotient_invariants: B is not contained in A");
  const auto &agens = a.gens.empty() ? a.members : a.gens;
  for (Id x : agens)
    for (Id y : agens)
      B0_ASSERT(b.contains(g.commutator(x, y)), "quotient_invariants: A/B is not abelian");
  std::map<Id, Id> coset;
  std::vector<Id> reps;
  for (Id x : a.members) {
    if (coset.count(x))
      continue;
    reps.push_back(x);
    for (Id y : b.members)
      coset[g.mul(x, y)] = x;
  }
  const std::uint64_t q = reps.size();
  B0_ASSERT(q * b.order() == a.order(), "quotient_invariants: B is not normal in A");
  std::vector<zl::Integer> cyclic;
  for (auto p : prime_factors(q)) {
    std::uint64_t target = 0;
    for (std::uint64_t t = q; t % p == 0; t /= p)
      ++target;
    // c[k] = log_p #{x : x^(p^k) = 1}.
    std::vector<std::uint64_t> c{0};
    std::uint64_t pk = 1;
    while (c.back() < target) {
      pk *= p;
      std::uint64_t count = 0;
      for (Id r : reps)
        count += b.contains(g.power(r, static_cast<std::int64_t>(pk)));
      std::uint64_t lg = 0;
      while (count > 1) {
        count /= p;
        ++lg;
      }
      c.push_back(lg);
    }
    c.push_back(c.back());
    zl::Integer pe = 1;
    for (std::size_t k = 1; k + 1 < c.size(); ++k) {
      pe *= p;
      const std::uint64_t at_least_k = c[k] - c[k - 1];
      const std::uint64_t at_least_k1 = c[k + 1] - c[k];
      for (std::uint64_t f = at_least_k1; f < at_least_k; ++f)
        cyclic.push_back(pe);
    }
  }
  return zl::AbelianInvariants::from_cyclic_orders(cyclic);
}

zl::AbelianInvariants transgression_image(const GroupTable &g, const Subgroup &n,
                                          const std::function<bool(Id)> &in_k) {
  if (!is_normal(g, n))
    throw UsageError("transgression_image: subgroup is not normal");
  const Subgroup a = intersection(n, derived_subgroup(g));
  std::vector<Id> kn;
  for (Id x : n.members)
    if (in_k(x))
      kn.push_back(x);
  const Subgroup b = subgroup_closure(g, kn);
  return quotient_invariants(g, a, b);
}

zl::AbelianInvariants transgression_image(const GroupTable &g, const Subgroup &n) {
  const auto k = commutator_set(g);
  return transgression_image(g, n, [&](Id x) { return k[x] != 0; });
}

bool freest_special_is_commutator(const PcGroup &h, std::size_t d, const Element &x) {
  const std::int64_t p = h.relative_order(0);
  for (std::size_t i = 0; i < d; ++i)
    B0_ASSERT(x[i] == 0, "freest_special_is_commutator: element outside H'");
  std::vector<std::vector<std::int64_t>> a(d, std::vector<std::int64_t>(d, 0));
  std::size_t pos = d;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j, ++pos) {
      a[i][j] = x[pos] % p;
      a[j][i] = (p - a[i][j]) % p;
    }
  // Rank over F_p.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < d; ++col) {
    std::size_t piv = rank;
    while (piv < d && a[piv][col] == 0)
      ++piv;
    if (piv == d)
      continue;
    std::swap(a[rank], a[piv]);
    std::int64_t inv = 1;
    while (a[rank][col] * inv % p != 1)
      ++inv;
    for (std::size_t r = 0; r < d; ++r)
      if (r != rank && a[r][col] != 0) {
        const std::int64_t f = a[r][col] * inv % p;
        for (std::size_t c = 0; c < d; ++c)
          a[r][c] = ((a[r][c] - f * a[rank][c]) % p + p) % p;
      }
    ++rank;
  }
  return rank <= 2;
}

} // namespace b0

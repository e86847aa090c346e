#include "b0/wedge.hpp"

#include <algorithm>
#include <deque>

#include "b0/error.hpp"
#include "b0/groupkit.hpp"
#include "b0/pc_subgroup.hpp"

namespace b0 {

namespace {

constexpr std::size_t kMaxDepth = 20000;
constexpr std::uint64_t kMaxDerived = 2'000'000;

std::int64_t sign(std::int64_t e) { return e < 0 ? -1 : 1; }

Word inverse_word(const Word &w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->gen, -it->exp});
  return out;
}

// Splits off the first unit letter g^{+-1}.
std::pair<Letter, Word> split_first(const Word &w) {
  const Letter x{w[0].gen, sign(w[0].exp)};
  Word rest = w;
  rest[0].exp -= x.exp;
  if (rest[0].exp == 0)
    rest.erase(rest.begin());
  return {x, rest};
}

bool is_unit(const Word &w) { return w.size() == 1 && (w[0].exp == 1 || w[0].exp == -1); }

void axpy(WedgeVector &dst, std::int64_t c, const WedgeVector &src) {
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] += c * src[i];
}

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n)
    return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

} // namespace

std::string rule_tag(Rule r) {
  switch (r) {
  case Rule::split_l:
    return "SPLIT-L";
  case Rule::split_r:
    return "SPLIT-R";
  case Rule::inv_l:
  case Rule::inv_r:
    return "INV";
  case Rule::commute_zero:
    return "COMMUTE-ZERO";
  case Rule::base:
    return "BASE";
  }
  return "?";
}

WedgeEngine::WedgeEngine(const PcGroup &g) : g_(&g), dim_(g.rank() * (g.rank() - 1) / 2) {
  const int cls = nilpotency_class_pc(g);
  if (cls > 4)
    throw UsageError("wedge expansion requires nilpotency class <= 4 (class " +
                     std::to_string(cls) + ")");
  if (!derived_subgroup_pc(g).is_abelian())
    throw UsageError("wedge expansion requires an abelian derived subgroup");
}

std::pair<std::size_t, std::size_t> WedgeEngine::pair_of(std::size_t idx) const {
  std::size_t i = 1;
  while (idx >= i) {
    idx -= i;
    ++i;
  }
  return {i, idx};
}

std::string WedgeEngine::pair_name(std::size_t idx) const {
  const auto [i, j] = pair_of(idx);
  return g_->name(i) + "^" + g_->name(j);
}

std::size_t WedgeEngine::add_node(TraceNode n) {
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

WedgeVector WedgeEngine::expand(const Element &u, const Element &v) {
  return nodes_[expand_node(u, v)].result;
}

std::size_t WedgeEngine::expand_words(const Word &u, const Word &v) {
  return split_words(u, v, true);
}

std::size_t WedgeEngine::expand_node(const Element &u, const Element &v) {
  const auto key = std::make_pair(u, v);
  if (const auto it = memo_.find(key); it != memo_.end())
    return it->second;
  if (g_->is_identity(g_->commutator(u, v))) {
    TraceNode n;
    n.rule = Rule::commute_zero;
    n.u = g_->to_word(u);
    n.v = g_->to_word(v);
    n.result.assign(dim_, 0);
    return memo_[key] = add_node(std::move(n));
  }
  if (active_.count(key) || depth_ > kMaxDepth)
    throw InternalError("wedge expansion does not terminate at " + g_->format(u) + " ^ " +
                        g_->format(v));
  active_[key] = true;
  ++depth_;
  const std::size_t id = split_words(g_->to_word(u), g_->to_word(v), false);
  --depth_;
  active_.erase(key);
  return memo_[key] = id;
}

std::size_t WedgeEngine::split_words(const Word &uw, const Word &vw, bool spelled) {
  TraceNode n;
  n.u = uw;
  n.v = vw;
  n.result.assign(dim_, 0);
  if (uw.empty() || vw.empty()) {
    n.rule = Rule::commute_zero;
    return add_node(std::move(n));
  }
  const Element u = g_->collect(uw), v = g_->collect(vw);
  const auto child = [&](const Word &a, const Word &b) {
    return spelled ? split_words(a, b, true) : expand_node(g_->collect(a), g_->collect(b));
  };
  if (!is_unit(uw)) {
    // xy ^ v = x ^ v + [x,v] ^ y + y ^ v
    auto [x, rest] = split_first(uw);
    const Element xe = g_->collect(Word{x}), ye = g_->collect(rest);
    n.rule = Rule::split_l;
    n.a = {x};
    n.b = rest;
    n.children = {{child({x}, vw), 1},
                  {expand_node(g_->commutator(xe, v), ye), 1},
                  {child(rest, vw), 1}};
  } else if (uw[0].exp == -1) {
    // x^-1 ^ v = -(x ^ v) - [x,v] ^ x^-1
    const Letter x{uw[0].gen, 1};
    const Element xe = g_->collect(Word{x});
    n.rule = Rule::inv_l;
    n.a = {x};
    n.children = {{child({x}, vw), -1}, {expand_node(g_->commutator(xe, v), u), -1}};
  } else if (!is_unit(vw)) {
    // u ^ yz = u ^ z + u ^ y + [u,y] ^ z
    auto [y, rest] = split_first(vw);
    const Element ye = g_->collect(Word{y}), ze = g_->collect(rest);
    n.rule = Rule::split_r;
    n.a = {y};
    n.b = rest;
    n.children = {{child(uw, rest), 1},
                  {child(uw, {y}), 1},
                  {expand_node(g_->commutator(u, ye), ze), 1}};
  } else if (vw[0].exp == -1) {
    // u ^ y^-1 = -(u ^ y) - [u,y] ^ y^-1
    const Letter y{vw[0].gen, 1};
    const Element ye = g_->collect(Word{y});
    n.rule = Rule::inv_r;
    n.a = {y};
    n.children = {{child(uw, {y}), -1}, {expand_node(g_->commutator(u, ye), v), -1}};
  } else {
    n.rule = Rule::base;
    const std::size_t i = uw[0].gen, j = vw[0].gen;
    if (i > j)
      n.result[pair_index(i, j)] = 1;
    else if (i < j)
      n.result[pair_index(j, i)] = -1;
    return add_node(std::move(n));
  }
  for (const auto &[c, coef] : n.children)
    axpy(n.result, coef, nodes_[c].result);
  return add_node(std::move(n));
}

Element WedgeEngine::evaluate(const WedgeVector &w) const {
  Element out = g_->identity();
  for (std::size_t idx = 0; idx < dim_; ++idx) {
    if (w[idx] == 0)
      continue;
    const auto [i, j] = pair_of(idx);
    const Element c = g_->commutator(g_->generator(i), g_->generator(j));
    out = g_->multiply(out, g_->power(c, w[idx]));
  }
  return out;
}

std::vector<std::pair<Word, std::string>> defining_relators(const PcGroup &g) {
  const auto &pres = g.presentation();
  std::vector<std::pair<Word, std::string>> out;
  const auto text = [&](const Word &w) {
    if (w.empty())
      return std::string("1");
    std::string s;
    for (const auto &l : w) {
      if (!s.empty())
        s += "*";
      s += pres.names[l.gen];
      if (l.exp != 1)
        s += "^" + std::to_string(l.exp);
    }
    return s;
  };
  for (std::size_t i = 0; i < g.rank(); ++i) {
    Word w{{i, pres.relative_orders[i]}};
    const Word inv = inverse_word(pres.power_rhs[i]);
    w.insert(w.end(), inv.begin(), inv.end());
    out.emplace_back(w, pres.names[i] + "^" + std::to_string(pres.relative_orders[i]) + " = " +
                            text(pres.power_rhs[i]));
  }
  for (std::size_t j = 0; j < g.rank(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      Word w{{j, -1}, {i, -1}, {j, 1}, {i, 1}};
      const Word *rhs = pres.comm(j, i);
      if (rhs) {
        const Word inv = inverse_word(*rhs);
        w.insert(w.end(), inv.begin(), inv.end());
      }
      out.emplace_back(w, "[" + pres.names[j] + "," + pres.names[i] + "] = " +
                              (rhs ? text(*rhs) : std::string("1")));
    }
  return out;
}

WedgeLattice relator_lattice(WedgeEngine &e) {
  const PcGroup &g = e.group();
  WedgeLattice lat;
  lat.dim = e.dim();
  for (const auto &[w, desc] : defining_relators(g))
    for (std::size_t k = 0; k < g.rank(); ++k) {
      const std::size_t root = e.expand_words(w, Word{{k, 1}});
      lat.relations.push_back(e.node(root).result);
      lat.sources.push_back("(" + desc + ") ^ " + g.name(k));
      lat.roots.push_back(root);
      lat.pairs.emplace_back(0, 0);
    }
  for (std::size_t i = 0; i < g.rank(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g.is_identity(g.commutator(g.generator(i), g.generator(j)))) {
        WedgeVector v(lat.dim, 0);
        v[e.pair_index(i, j)] = 1;
        lat.relations.push_back(std::move(v));
        lat.sources.push_back("commuting " + g.name(i) + " ^ " + g.name(j));
        lat.roots.push_back(kNoNode);
        lat.pairs.emplace_back(i, j);
      }
  for (const auto &r : lat.relations)
    B0_ASSERT(g.is_identity(e.evaluate(r)), "relation does not evaluate to 1");
  return lat;
}

WedgeResult wedge_quotient(WedgeEngine &e, const WedgeLattice &lat,
                           const std::vector<WedgeVector> &extra) {
  const PcGroup &g = e.group();
  const std::size_t dim = e.dim();
  WedgeResult out;
  out.relation_count = lat.relations.size() + extra.size();
  if (dim == 0) {
    out.derived_order = 1;
    return out;
  }

  // D with D Z^dim inside the relator lattice.
  const zl::IntMatrix rel = zl::IntMatrix::from_rows(lat.relations, dim);
  const auto diag = zl::smith_diagonal(rel);
  zl::Integer det = 1;
  std::size_t rank = 0;
  for (const auto &d : diag)
    if (d != 0) {
      det *= d;
      ++rank;
    }
  const bool modular = rank == dim && det < (zl::Integer(1) << 62);
  out.modulus = modular ? static_cast<std::uint64_t>(det) : 0;

  // G' by BFS over the images of the w_ij, with tree words.
  std::vector<Element> images(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const auto [i, j] = e.pair_of(idx);
    images[idx] = g.commutator(g.generator(i), g.generator(j));
  }
  std::map<Element, std::size_t> index;
  std::vector<Element> elems{g.identity()};
  std::vector<WedgeVector> tree{WedgeVector(dim, 0)};
  index[g.identity()] = 0;
  std::vector<WedgeVector> kernel;
  for (std::size_t t = 0; t < elems.size(); ++t)
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const Element y = g.multiply(elems[t], images[idx]);
      WedgeVector w = tree[t];
      w[idx] += 1;
      const auto it = index.find(y);
      if (it == index.end()) {
        if (elems.size() >= kMaxDerived)
          throw CapExceeded("enumerating the derived subgroup", elems.size() + 1, kMaxDerived);
        index[y] = elems.size();
        elems.push_back(y);
        tree.push_back(std::move(w));
      } else {
        axpy(w, -1, tree[it->second]);
        if (std::any_of(w.begin(), w.end(), [](std::int64_t c) { return c != 0; }))
          kernel.push_back(std::move(w));
      }
    }
  out.derived_order = elems.size();

  if (modular && out.modulus == 1) {
    // The relators alone already force Z^dim = 0.
    out.invariants = zl::AbelianInvariants::trivial();
    out.lattice = zl::AbelianInvariants::trivial();
  } else if (modular) {
    const std::uint64_t n = out.modulus;
    const auto reduce = [&](const WedgeVector &v) {
      zl::ModRow r(dim);
      for (std::size_t c = 0; c < dim; ++c)
        r[c] = zl::reduce_signed(v[c], n);
      return r;
    };
    zl::HowellBasis basis(dim, n);
    for (const auto &r : lat.relations)
      basis.insert(reduce(r));
    for (const auto &r : extra)
      basis.insert(reduce(r));
    const zl::ModRows rels = basis.rows();
    zl::ModRows gens;
    for (const auto &k : kernel)
      gens.push_back(reduce(k));
    out.invariants = zl::subquotient_invariants_mod(gens, rels, dim, n);
    out.lattice =
        zl::AbelianInvariants::from_cyclic_orders(zl::cokernel_cyclic_orders_mod(rels, dim, n));
  } else {
    std::vector<WedgeVector> all = lat.relations;
    all.insert(all.end(), extra.begin(), extra.end());
    const zl::IntMatrix rels = zl::IntMatrix::from_rows(all, dim);
    const zl::IntMatrix gens = zl::IntMatrix::from_rows(kernel, dim);
    out.invariants =
        zl::subquotient_invariants(gens, rels, std::vector<zl::Integer>(dim, zl::Integer(0)));
    out.lattice = zl::AbelianInvariants::cokernel(rels);
  }
  return out;
}

WedgeResult b0_class2(const PcGroup &g, std::uint64_t pair_cap) {
  const int cls = nilpotency_class_pc(g);
  if (cls > 2)
    throw UsageError("the exact exterior-square engine requires class <= 2 (class " +
                     std::to_string(cls) + ")");
  WedgeEngine e(g);
  const WedgeLattice lat = relator_lattice(e);
  const BilinearPairs bp = commuting_pairs_bilinear(g, pair_cap);
  // In class 2 the wedge is bilinear modulo M0*, and central factors drop out.
  std::vector<WedgeVector> extra;
  extra.reserve(bp.pairs.size());
  for (const auto &[a, b] : bp.pairs) {
    WedgeVector v(e.dim(), 0);
    for (std::size_t i = 0; i < g.rank(); ++i) {
      if (a[i] == 0)
        continue;
      for (std::size_t j = 0; j < g.rank(); ++j) {
        if (b[j] == 0 || i == j)
          continue;
        if (i > j)
          v[e.pair_index(i, j)] += a[i] * b[j];
        else
          v[e.pair_index(j, i)] -= a[i] * b[j];
      }
    }
    extra.push_back(std::move(v));
  }
  WedgeResult out = wedge_quotient(e, lat, extra);
  out.commuting_pairs = bp.pairs.size();
  return out;
}

Element power_comm_expand(const PcGroup &g, const Element &x, const Element &y, std::int64_t n) {
  if (n < 0)
    throw UsageError("power_comm_expand requires n >= 0");
  const Element c1 = g.commutator(x, y);
  const Element c2 = g.commutator(c1, x);
  const Element c3 = g.commutator(c2, x);
  const Element c4 = g.commutator(c3, x);
  const Element c5 = g.commutator(c2, c1);
  const std::int64_t sigma = n * (n - 1) * (2 * n - 1) / 6;
  Element out = g.power(c1, n);
  out = g.multiply(out, g.power(c2, binom(n, 2)));
  out = g.multiply(out, g.power(c3, binom(n, 3)));
  out = g.multiply(out, g.power(c4, binom(n, 4)));
  out = g.multiply(out, g.power(c5, sigma));
  return out;
}

} // namespace b0

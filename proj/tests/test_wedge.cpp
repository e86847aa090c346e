#include "doctest.h"

#include <map>
#include <optional>
#include <random>

#include "b0/catalog.hpp"
#include "b0/dsl.hpp"
#include "b0/error.hpp"
#include "b0/groupkit.hpp"
#include "b0/howell.hpp"
#include "b0/pc_subgroup.hpp"
#include "b0/wedge.hpp"

using namespace b0;

namespace {

PcGroup cat(const std::string &ref) { return PcGroup(catalog(CatalogParams::parse(ref))); }

// Membership in the relation lattice plus extra rows, decided modulo D
// (D Z^dim lies inside).
class LatticeTest {
public:
  LatticeTest(WedgeEngine &e, const WedgeLattice &lat, const std::vector<WedgeVector> &extra = {})
      : d_(wedge_quotient(e, lat, extra).modulus), basis_(e.dim(), d_ == 0 ? 1 : d_) {
    REQUIRE(d_ != 0);
    for (const auto &r : lat.relations)
      basis_.insert(reduce(r));
    for (const auto &r : extra)
      basis_.insert(reduce(r));
  }
  bool contains(const WedgeVector &v) const { return basis_.contains(reduce(v)); }

private:
  zl::ModRow reduce(const WedgeVector &v) const {
    zl::ModRow out(v.size());
    const auto d = static_cast<std::int64_t>(d_);
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = static_cast<std::uint64_t>((v[i] % d + d) % d);
    return out;
  }
  std::uint64_t d_;
  zl::HowellBasis basis_;
};

WedgeVector spelled(WedgeEngine &e, const std::string &u, const std::string &v) {
  const auto &g = e.group();
  const auto &names = g.presentation().names;
  return e.node(e.expand_words(parse_word(u, names), parse_word(v, names))).result;
}

WedgeVector minus(WedgeVector a, const WedgeVector &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] -= b[i];
  return a;
}

// Spelled expansions of every commuting pair, up to central tails (class 2),
// cached per group.
std::vector<WedgeVector> commuting_rows(WedgeEngine &e) {
  static std::map<std::string, std::vector<WedgeVector>> cache;
  const auto &g = e.group();
  auto &rows = cache[emit_pc(g.presentation())];
  if (rows.empty())
    for (const auto &[x, y] : commuting_pairs_bilinear(g, 1u << 20).pairs)
      rows.push_back(e.node(e.expand_words(g.to_word(x), g.to_word(y))).result);
  return rows;
}

// A spelling of x that starts with a random word of the given length.
Word random_spelling(const PcGroup &g, const Element &x, std::mt19937_64 &rng, int len) {
  std::uniform_int_distribution<std::size_t> gen(0, g.rank() - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  Word w;
  for (int k = 0; k < len; ++k)
    w.push_back({gen(rng), sign(rng) ? 1 : -1});
  const Element rest = g.multiply(g.inverse(g.collect(w)), x);
  for (const auto &l : g.to_word(rest))
    w.push_back(l);
  return w;
}

} // namespace

TEST_SUITE("wedge") {

TEST_CASE("power commutator expansion") {
  for (const std::string ref : {"phi28,p=5", "phi29,p=7", "phi15,p=5", "heisenberg,r=4,d=1"}) {
    const PcGroup g = cat(ref);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> d(0, g.order() - 1);
    for (int k = 0; k < 50; ++k) {
      const Element x = g.element_at(d(rng)), y = g.element_at(d(rng));
      CHECK(power_comm_expand(g, x, y, 0) == g.identity());
      CHECK(power_comm_expand(g, x, y, 1) == g.commutator(x, y));
      for (const std::int64_t n : {2, 3, 5, 7})
        CHECK(power_comm_expand(g, x, y, n) == g.commutator(g.power(x, n), y));
    }
  }
  const PcGroup g = cat("phi28,p=5");
  const Element a1 = g.collect("a1"), a = g.collect("a");
  CHECK(power_comm_expand(g, a1, a, 5) == g.commutator(g.power(a1, 5), a));
  CHECK_THROWS_AS(power_comm_expand(g, a1, a, -1), UsageError);
}

TEST_CASE("u ^ u and relator spellings vanish modulo the lattice") {
  std::mt19937_64 rng(9);
  for (const std::string ref : {"phi15,p=5", "phi28,p=5", "heisenberg,r=4,d=2"}) {
    const PcGroup g = cat(ref);
    WedgeEngine e(g);
    const auto lat = relator_lattice(e);
    const LatticeTest in(e, lat);
    std::uniform_int_distribution<std::uint64_t> d(0, g.order() - 1);
    for (int k = 0; k < 30; ++k) {
      const Word w = g.to_word(g.element_at(d(rng)));
      CHECK(in.contains(e.node(e.expand_words(w, w)).result));
    }
  }
  {
    // A commuting pair: zero in the quotient by M0*, not by the relators alone.
    const PcGroup g = cat("phi15,p=5");
    WedgeEngine e(g);
    const auto lat = relator_lattice(e);
    const auto v = spelled(e, "a1*a3^-1", "a2*a4");
    CHECK(g.is_identity(e.evaluate(v)));
    CHECK_FALSE(LatticeTest(e, lat).contains(v));
    CHECK(LatticeTest(e, lat, commuting_rows(e)).contains(v));
  }
  {
    const PcGroup g = cat("phi28,p=5");
    WedgeEngine e(g);
    const LatticeTest in(e, relator_lattice(e));
    CHECK(in.contains(spelled(e, "a2^5", "a")));
    CHECK(in.contains(spelled(e, "a^25", "a1")));
    CHECK_FALSE(in.contains(spelled(e, "a1", "a")));
  }
}

TEST_CASE("expansion is independent of the spelling") {
  // Different spellings apply COMMUTE-ZERO at different nodes, so values
  // agree modulo the relators plus M0*; in class 2 the bilinear commuting
  // pairs span the latter.
  std::mt19937_64 rng(13);
  for (const std::string ref : {"heisenberg,r=4,d=1", "phi15,p=5", "heisenberg,r=6,d=2",
                                "freest_special,d=3,p=3", "phi28,p=5", "phi29,p=5"}) {
    const PcGroup g = cat(ref);
    WedgeEngine e(g);
    const auto lat = relator_lattice(e);
    const bool class2 = nilpotency_class(g) <= 2;
    std::optional<LatticeTest> in;
    if (class2)
      in.emplace(e, lat, commuting_rows(e));
    std::uniform_int_distribution<std::uint64_t> d(0, g.order() - 1);
    std::size_t bad = 0;
    for (int k = 0; k < 40; ++k) {
      const Element x = g.element_at(d(rng)), y = g.element_at(d(rng));
      const auto base = e.node(e.expand_words(g.to_word(x), g.to_word(y))).result;
      const auto left =
          e.node(e.expand_words(random_spelling(g, x, rng, 4), g.to_word(y))).result;
      const auto right =
          e.node(e.expand_words(g.to_word(x), random_spelling(g, y, rng, 4))).result;
      const auto nf = e.expand(x, y);
      for (const auto *v : {&base, &left, &right, &nf}) {
        bad += e.evaluate(*v) != g.commutator(x, y);
        if (in)
          bad += !in->contains(minus(base, *v));
      }
    }
    CHECK_MESSAGE(bad == 0, ref);
  }
}

TEST_CASE("exact class-2 engine on trivial-B0 families") {
  for (std::int64_t r = 2; r <= 12; ++r)
    for (std::int64_t d = 1; d <= r; ++d) {
      if (r % d != 0)
        continue;
      const PcGroup g = cat("heisenberg,r=" + std::to_string(r) + ",d=" + std::to_string(d));
      const auto res = b0_class2(g);
      CHECK_MESSAGE(res.invariants.order() == 1, "r=" << r << " d=" << d);
      // eps maps Z^dim / L onto G' with kernel B0~.
      CHECK(res.lattice.order() == res.invariants.order() * res.derived_order);
      CHECK(res.derived_order == static_cast<std::uint64_t>(r / d));
    }
  for (const std::string ref : {"phi15,p=5", "phi15,p=7", "cyclic,n=12",
                                "cyclic,n=4 x cyclic,n=6", "freest_special,d=4,p=2",
                                "heisenberg,r=2,d=1:1"}) {
    const auto res = b0_class2(cat(ref));
    CHECK_MESSAGE(res.invariants.order() == 1, ref);
    CHECK(res.lattice.order() == res.derived_order);
    CHECK(res.derived_order == derived_subgroup_pc(cat(ref)).order());
  }
  CHECK_THROWS_AS(b0_class2(cat("phi28,p=5")), UsageError);
}

TEST_CASE("evaluation is onto the derived subgroup") {
  for (const std::string ref : {"phi15,p=5", "phi28,p=5", "heisenberg,r=6,d=2"}) {
    const PcGroup g = cat(ref);
    WedgeEngine e(g);
    std::vector<Element> images;
    for (std::size_t idx = 0; idx < e.dim(); ++idx) {
      WedgeVector w(e.dim(), 0);
      w[idx] = 1;
      images.push_back(e.evaluate(w));
    }
    CHECK(PcSubgroup::generated(g, images) == derived_subgroup_pc(g));
    const auto q = wedge_quotient(e, relator_lattice(e));
    CHECK(q.lattice.order() == q.invariants.order() * q.derived_order);
  }
}

TEST_CASE("trace nodes record their rules") {
  const PcGroup g = cat("phi28,p=5");
  WedgeEngine e(g);
  const auto root = e.node(e.expand_words(parse_word("a3*a", g.presentation().names),
                                           parse_word("a*a1^5", g.presentation().names)));
  CHECK(root.rule == Rule::split_l);
  for (const auto &[child, coef] : root.children)
    CHECK(coef == 1);
  std::size_t counts[6] = {};
  for (const auto &n : e.nodes())
    ++counts[static_cast<int>(n.rule)];
  CHECK(counts[static_cast<int>(Rule::base)] > 0);
  CHECK(counts[static_cast<int>(Rule::commute_zero)] > 0);
  CHECK(rule_tag(Rule::split_l) == "SPLIT-L");
  CHECK(rule_tag(Rule::commute_zero) == "COMMUTE-ZERO");
}

}

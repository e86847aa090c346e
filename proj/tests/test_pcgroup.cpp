#include "doctest.h"

#include <random>
#include <set>

#include "b0/catalog.hpp"
#include "b0/dsl.hpp"
#include "b0/error.hpp"
#include "b0/pcgroup.hpp"

using namespace b0;

namespace {

PcGroup cat(const std::string &ref) { return PcGroup(catalog(CatalogParams::parse(ref))); }

const std::vector<std::string> kCatalog = {
    "phi15,p=5",          "phi15,p=7",          "phi15,p=11",
    "phi28,p=5",          "phi28,p=7",          "phi28,p=11",
    "phi29,p=5",          "phi29,p=7",          "phi29,p=11",
    "heisenberg,r=2,d=1", "heisenberg,r=4,d=1", "heisenberg,r=4,d=2",
    "freest_special,d=4,p=2", "freest_special,d=4,p=3",
};

Element random_element(const PcGroup &g, std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, g.order() - 1);
  return g.element_at(d(rng));
}

// 3x3 unitriangular matrices over Z/r, stored as (a, b, c) for
// [[1, a, c], [0, 1, b], [0, 0, 1]].
struct Unitri {
  std::int64_t a, b, c;
  bool operator==(const Unitri &) const = default;
};

Unitri mul(const Unitri &x, const Unitri &y, std::int64_t r) {
  return {(x.a + y.a) % r, (x.b + y.b) % r, (x.c + y.c + x.a * y.b) % r};
}

} // namespace

TEST_SUITE("pcgroup") {

TEST_CASE("parse a Heisenberg presentation mod 5") {
  const auto pres = parse_pc(R"(
    group H { gens x, y, z;
      order x = 5; order y = 5; order z = 5;
      comm [y, x] = z; })");
  CHECK(pres.rank() == 3);
  CHECK(pres.relative_orders == std::vector<std::int64_t>{5, 5, 5});
  const PcGroup g(pres);
  CHECK(g.order() == 125);
}

TEST_CASE("catalog text round trip") {
  const auto pres = catalog(CatalogParams::parse("phi28,p=5"));
  const auto back = parse_pc(emit_pc(pres));
  CHECK(back.rank() == 5);
  CHECK(back.relative_orders == std::vector<std::int64_t>{25, 5, 5, 5, 5});
  CHECK(back.power_rhs == pres.power_rhs);
  CHECK(back.comm_rhs == pres.comm_rhs);
  CHECK(PcGroup(parse_pc(emit_pc(catalog(CatalogParams::parse("phi15,p=5"))))).order() == 15625);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(PcGroup(parse_pc("group G { gens g1, g2, g3; comm [g1, g2] = g3; }")),
                       doctest::Contains("ordering violation"), UsageError);
  CHECK_THROWS_WITH_AS(PcGroup(parse_pc("group G { gens a, a; }")),
                       doctest::Contains("duplicate generator"), UsageError);
  CHECK_THROWS_WITH_AS(PcGroup(parse_pc("group G { gens a; order a = 1; }")),
                       doctest::Contains("at least 2"), UsageError);
  CHECK_THROWS_WITH_AS(PcGroup(parse_pc("group G { gens a, b; pow a^2 = a; }")),
                       doctest::Contains("ordering violation"), UsageError);
  try {
    parse_pc("group G {\n  gens a;\n  order a = ;\n}");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
}

TEST_CASE("collect") {
  const PcGroup g = cat("phi28,p=5");
  CHECK(g.collect("a1^-1*a^-1*a1*a") == g.collect("a2"));
  CHECK(g.is_identity(g.collect(Word{})));
  CHECK_THROWS_AS(g.collect("q"), UsageError);
}

TEST_CASE("Heisenberg mod 2 and mod 4 tables match unitriangular matrices") {
  for (const std::int64_t r : {2, 4}) {
    const PcGroup g = cat("heisenberg,r=" + std::to_string(r) + ",d=1");
    // x1 -> E12, y1 -> E23, z -> E13; [x, y] = x^-1 y^-1 x y = E13.
    const auto model = [&](const Element &e) {
      Unitri m{0, 0, 0};
      m = mul(m, {e[0] % r, 0, 0}, r);
      m = mul(m, {0, e[1] % r, 0}, r);
      m = mul(m, {0, 0, e[2] % r}, r);
      return m;
    };
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> images;
    for (std::uint64_t i = 0; i < g.order(); ++i) {
      const Element a = g.element_at(i);
      const Unitri ma = model(a);
      images.insert({ma.a, ma.b, ma.c});
      for (std::uint64_t j = 0; j < g.order(); ++j) {
        const Element b = g.element_at(j);
        CHECK(model(g.multiply(a, b)) == mul(ma, model(b), r));
      }
    }
    CHECK(images.size() == g.order());
  }
}

TEST_CASE("commutator orientation and primitive root") {
  const PcGroup g = cat("phi15,p=5");
  const Element a = g.collect("a2");
  CHECK(g.is_identity(g.commutator(a, a)));
  CHECK(smallest_primitive_root(5) == 2);
  CHECK(g.commutator(g.collect("a2"), g.collect("a4")) == g.collect("b2^2"));
  for (const auto &ref : kCatalog) {
    const PcGroup h = cat(ref);
    const Element x = h.element_at(h.order() / 3), y = h.element_at(h.order() / 7);
    CHECK(h.commutator(x, y) ==
          h.multiply(h.multiply(h.inverse(x), h.inverse(y)), h.multiply(x, y)));
  }
}

TEST_CASE("inverse is two-sided") {
  std::mt19937_64 rng(1);
  for (const auto &ref : kCatalog) {
    const PcGroup g = cat(ref);
    for (int k = 0; k < 1000; ++k) {
      const Element a = random_element(g, rng);
      CHECK(g.is_identity(g.multiply(a, g.inverse(a))));
      CHECK(g.is_identity(g.multiply(g.inverse(a), a)));
    }
  }
}

TEST_CASE("associativity fuzz") {
  std::mt19937_64 rng(2);
  for (const auto &ref : kCatalog) {
    const PcGroup g = cat(ref);
    std::size_t bad = 0;
    for (int k = 0; k < 10000; ++k) {
      const Element a = random_element(g, rng), b = random_element(g, rng),
                    c = random_element(g, rng);
      bad += g.multiply(g.multiply(a, b), c) != g.multiply(a, g.multiply(b, c));
    }
    CHECK_MESSAGE(bad == 0, ref);
  }
}

TEST_CASE("consistency of the catalog") {
  for (const auto &ref : kCatalog)
    CHECK_MESSAGE(consistency_check(catalog(CatalogParams::parse(ref))).consistent(), ref);
  CHECK(cat("phi15,p=5").order() == 15625);
  CHECK(cat("heisenberg,r=4,d=2").order() == 64);
  CHECK(cat("freest_special,d=4,p=3").order() == 59049);
  CHECK(cat("heisenberg,r=2,d=1:1").order() == 32);
}

TEST_CASE("inconsistent presentation names the overlap") {
  // g2^g1 = g2 g3 with g3 central of order 5 forces (g2^g1)^3 = g3^3 != 1.
  const auto pres = parse_pc(R"(
    group Bad { gens g1, g2, g3;
      order g1 = 5; order g2 = 3; order g3 = 5;
      comm [g2, g1] = g3; })");
  const auto report = consistency_check(pres);
  REQUIRE_FALSE(report.consistent());
  bool named = false;
  for (const auto &f : report.failures)
    named |= f.find("g2^3") != std::string::npos;
  CHECK(named);
  CHECK_THROWS_AS(PcGroup{pres}, UsageError);
}

TEST_CASE("abelian presentations are consistent") {
  const auto pres = parse_pc("group A { gens a, b, c; order a = 4; order b = 6; order c = 2; }");
  CHECK(consistency_check(pres).consistent());
  CHECK(PcGroup(pres).order() == 48);
}

TEST_CASE("normal forms enumerate the group") {
  for (const std::string ref : {"heisenberg,r=4,d=2", "freest_special,d=4,p=2", "phi15,p=5",
                                "heisenberg,r=2,d=1:1", "phi28,p=5"}) {
    const PcGroup g = cat(ref);
    if (g.order() > (1u << 14))
      continue;
    std::set<Element> seen{g.identity()};
    std::vector<Element> queue{g.identity()};
    for (std::size_t t = 0; t < queue.size(); ++t)
      for (std::size_t i = 0; i < g.rank(); ++i) {
        Element y = g.multiply(queue[t], g.generator(i));
        if (seen.insert(y).second)
          queue.push_back(std::move(y));
      }
    CHECK_MESSAGE(seen.size() == g.order(), ref);
  }
}

TEST_CASE("defining relations replay verbatim") {
  for (const auto &ref : kCatalog) {
    const auto params = CatalogParams::parse(ref);
    const PcGroup g(catalog(params));
    const auto failures = verify_defining_relations(g, params);
    CHECK_MESSAGE(failures.empty(), ref);
  }
  CHECK(smallest_nonresidue(5) == 2);
  const auto p29 = catalog(CatalogParams::parse("phi29,p=5"));
  CHECK(p29.name == "phi29_p5");
}

TEST_CASE("catalog parameter errors") {
  CHECK_THROWS_WITH_AS(catalog(CatalogParams::parse("phi28,p=3")), doctest::Contains("p>3"),
                       UsageError);
  CHECK_THROWS_AS(catalog(CatalogParams::parse("phi15,p=9")), UsageError);
  CHECK_THROWS_AS(catalog(CatalogParams::parse("heisenberg,r=4,d=3")), UsageError);
  CHECK_THROWS_AS(catalog(CatalogParams::parse("heisenberg,r=8,d=2:1")), UsageError);
}

TEST_CASE("commutator identities") {
  std::mt19937_64 rng(3);
  for (const auto &ref : kCatalog) {
    const PcGroup g = cat(ref);
    const auto C = [&](const Element &x, const Element &y) { return g.commutator(x, y); };
    const auto M = [&](std::initializer_list<Element> xs) {
      Element out = g.identity();
      for (const auto &x : xs)
        out = g.multiply(out, x);
      return out;
    };
    std::size_t bad = 0;
    for (int k = 0; k < 300; ++k) {
      const Element x = random_element(g, rng), y = random_element(g, rng),
                    z = random_element(g, rng);
      bad += C(g.multiply(x, y), z) != M({C(x, z), C(C(x, z), y), C(y, z)});
      bad += C(x, g.multiply(y, z)) != M({C(x, z), C(x, y), C(C(x, y), z)});
      const Element xi = g.inverse(x);
      bad += C(xi, y) != M({g.inverse(C(C(x, y), xi)), g.inverse(C(x, y))});
    }
    CHECK_MESSAGE(bad == 0, ref);
  }
}

}

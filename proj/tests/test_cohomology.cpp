#include "doctest.h"

#include <memory>

#include "b0/catalog.hpp"
#include "b0/cohomology.hpp"
#include "b0/error.hpp"
#include "b0/groupkit.hpp"
#include "b0/howell.hpp"

using namespace b0;

namespace {

GroupTable table(const std::string &ref) {
  return enumerate(std::make_shared<const PcGroup>(catalog(CatalogParams::parse(ref))), 1024);
}

std::uint64_t span_order(const zl::ModRows &rows, std::size_t cols, std::uint64_t n) {
  zl::HowellBasis b(cols, n);
  for (const auto &r : rows)
    b.insert(r);
  return static_cast<std::uint64_t>(b.span_order());
}

} // namespace

TEST_SUITE("cohomology") {

TEST_CASE("cyclic groups have trivial multiplier") {
  for (const int k : {2, 3, 4, 5, 6, 8, 9, 12}) {
    const auto g = table("cyclic,n=" + std::to_string(k));
    CHECK(h2_mod(g, k).h2().order() == 1);
    CHECK(h2_mod(g, 2 * k).h2().order() == 1);
  }
}

TEST_CASE("Klein four: H^2 = Z/2, checked against all normalized functions") {
  const auto g = table("elementary_abelian,p=2,k=2");
  const auto h = h2_mod(g, 4);
  CHECK(h.h2().to_string() == "Z/2");

  // Exhaustive: normalized c: G x G -> Z/4 has 9 free values.
  std::size_t cocycles = 0;
  for (std::uint32_t code = 0; code < (1u << 18); ++code) {
    Cocycle c;
    c.modulus = 4;
    c.elements = {0, 1, 2, 3};
    c.values.assign(16, 0);
    for (std::size_t i = 1, t = 0; i < 4; ++i)
      for (std::size_t j = 1; j < 4; ++j, t += 2)
        c.values[i * 4 + j] = (code >> t) & 3;
    cocycles += is_normalized_cocycle(g, c);
  }
  // H^2(V4, Z/4) has order 8 and B^2 = C^1 / Hom(V4, Z/4) has order 16, so
  // |Z^2| = 128; the Bockstein image Hom(V4, Q/Z) / 4 has order 4.
  CHECK(cocycles == 128);
  CHECK(span_order(h.cocycles(), h.coordinate_count(), 4) == 128);
  CHECK(span_order(h.coboundaries(), h.coordinate_count(), 4) == 16);
  auto both = h.coboundaries();
  both.insert(both.end(), h.bockstein().begin(), h.bockstein().end());
  CHECK(span_order(both, h.coordinate_count(), 4) == 64);
}

TEST_CASE("expanded coordinates are normalized cocycles") {
  for (const std::string ref : {"heisenberg,r=2,d=1", "cyclic,n=6", "elementary_abelian,p=3,k=2"}) {
    const auto g = table(ref);
    const auto h = h2_mod(g, g.order());
    for (const auto &row : h.cocycles()) {
      const Cocycle c = h.expand(row);
      CHECK(is_normalized_cocycle(g, c));
      CHECK(h.coordinates(c) == row);
    }
    for (const auto &row : h.coboundaries())
      CHECK(h.contains(h.expand(row), false));
  }
}

TEST_CASE("H^2 examples") {
  CHECK(h2_mod(table("heisenberg,r=2,d=1"), 8).h2().to_string() == "Z/2");
  CHECK(h2_mod(table("cyclic,n=4 x cyclic,n=4"), 16).h2().to_string() == "Z/4");
  CHECK(h2_mod(table("cyclic,n=6 x cyclic,n=4"), 24).h2().to_string() == "Z/2");
  CHECK(h2_mod(table("elementary_abelian,p=2,k=3"), 8).h2().to_string() == "Z/2 x Z/2 x Z/2");
  // Kunneth: H^2(D4 x Z/2) = Z/2 + (Z/2 x Z/2) (x) Z/2.
  CHECK(h2_mod(table("heisenberg,r=2,d=1 x cyclic,n=2"), 16).h2().order() == 8);
  CHECK_THROWS_AS(h2_mod(table("cyclic,n=4"), 6), UsageError);
}

TEST_CASE("restriction") {
  const auto g = table("heisenberg,r=2,d=1 x cyclic,n=2");
  const std::uint64_t n = g.order();
  const auto h = h2_mod(g, n);
  std::vector<Subgroup> subs = bicyclic_subgroups(g);
  subs.push_back(trivial_subgroup());
  for (const auto &a : subs) {
    const auto ha = h2_mod(g, a, n);
    for (const auto &row : h.cocycles()) {
      const Cocycle r = restrict_class(g, a, h.expand(row));
      CHECK(is_normalized_cocycle(g, r));
      if (a.order() == 1)
        CHECK(ha.contains(r, false));
    }
    for (const auto &row : h.coboundaries())
      CHECK(ha.contains(restrict_class(g, a, h.expand(row)), false));
    for (const auto &row : h.bockstein())
      CHECK(ha.contains(restrict_class(g, a, h.expand(row)), true));
  }
}

TEST_CASE("oracle examples") {
  for (const std::string ref : {"heisenberg,r=2,d=1", "cyclic,n=8", "elementary_abelian,p=2,k=3",
                                "heisenberg,r=3,d=1", "heisenberg,r=2,d=1 x cyclic,n=2",
                                "freest_special,d=3,p=2"}) {
    const auto g = table(ref);
    const auto a = b0_oracle(g, SubgroupMode::abelian);
    CHECK_MESSAGE(a.b0.order() == 1, ref);
    CHECK(a.modulus == g.order());
  }
  CHECK(b0_oracle(table("heisenberg,r=2,d=1"), SubgroupMode::abelian).h2.to_string() == "Z/2");
}

TEST_CASE("oracle is independent of the modulus and the subgroup family") {
  for (const std::string ref : {"heisenberg,r=2,d=1", "cyclic,n=4 x cyclic,n=2",
                                "heisenberg,r=2,d=1 x cyclic,n=2", "heisenberg,r=4,d=2"}) {
    const auto g = table(ref);
    const auto base = b0_oracle(g, SubgroupMode::abelian, g.order());
    const auto twice = b0_oracle(g, SubgroupMode::abelian, 2 * g.order());
    const auto bic = b0_oracle(g, SubgroupMode::bicyclic, g.order());
    CHECK(base.b0.to_string() == twice.b0.to_string());
    CHECK(base.h2.to_string() == twice.h2.to_string());
    CHECK(base.b0.to_string() == bic.b0.to_string());
  }
}

TEST_CASE("order 64 class 3 group has B0 = Z/2") {
  const auto pc = load_group_ref(std::string(B0_DATA_DIR) + "/groups/order64_class3_b0.pc", ".");
  const auto g = enumerate(pc, 64);
  CHECK(nilpotency_class(g) == 3);
  CHECK(b0_oracle(g, SubgroupMode::abelian).b0.to_string() == "Z/2");
  CHECK(b0_oracle(g, SubgroupMode::bicyclic).b0.to_string() == "Z/2");
}

TEST_CASE("oracle cap") {
  CHECK(oracle_cap() <= kOracleHardCap);
  const auto g = table("cyclic,n=256");
  CHECK_THROWS_AS(b0_oracle(g, SubgroupMode::abelian), CapExceeded);
}

}

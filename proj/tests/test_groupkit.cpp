#include "doctest.h"

#include <algorithm>
#include <memory>

#include "b0/catalog.hpp"
#include "b0/central_product.hpp"
#include "b0/error.hpp"
#include "b0/groupkit.hpp"
#include "b0/kernels.hpp"
#include "b0/pc_subgroup.hpp"
#include "b0/suite.hpp"
#include "b0/wedge.hpp"

using namespace b0;

namespace {

std::shared_ptr<const PcGroup> pc(const std::string &ref) {
  return std::make_shared<const PcGroup>(catalog(CatalogParams::parse(ref)));
}

GroupTable table(const std::string &ref) { return enumerate(pc(ref), 1u << 16); }

Id id(const GroupTable &g, const std::string &word) { return g.id_of(g.pc()->collect(word)); }

std::size_t count(const kernels::Bitmap &b) {
  return static_cast<std::size_t>(std::count(b.begin(), b.end(), 1));
}

} // namespace

TEST_SUITE("groupkit") {

TEST_CASE("enumeration and its cap") {
  CHECK(table("heisenberg,r=2,d=1").order() == 8);
  CHECK(table("freest_special,d=4,p=2").order() == 1024);
  CHECK_THROWS_WITH_AS(enumerate(pc("phi15,p=5"), 1000), doctest::Contains("requires 15625"),
                       CapExceeded);
  const auto g = table("phi28,p=5");
  for (Id x = 0; x < g.order(); x += 97) {
    CHECK(g.id_of(g.element(x)) == x);
    CHECK(g.mul(x, g.inv(x)) == g.identity());
  }
}

TEST_CASE("derived subgroup, center and commutator set") {
  const auto d4 = table("heisenberg,r=2,d=1");
  CHECK(derived_subgroup(d4).order() == 2);
  CHECK(center(d4).order() == 2);
  CHECK(count(commutator_set(d4)) == 2);
  CHECK(is_commutator_closed(d4));
  CHECK_FALSE(is_abelian(d4));

  const auto fs = table("freest_special,d=4,p=2");
  const auto fsd = derived_subgroup(fs);
  CHECK(fsd.order() == 64);
  const auto kfs = commutator_set(fs);
  const std::size_t k = count(kfs);
  CHECK(k < fsd.order());
  CHECK_FALSE(is_commutator_closed(fs));
  // Alternating forms on F_2^4 of rank <= 2: zero plus the decomposable ones.
  CHECK(k == 36);
  for (const Id x : fsd.members)
    CHECK(static_cast<bool>(kfs[x]) ==
          freest_special_is_commutator(*fs.pc(), 4, fs.element(x)));

  const auto p15 = pc("phi15,p=5");
  CHECK(derived_subgroup_pc(*p15).order() == 25);
  const auto klein = table("elementary_abelian,p=2,k=2");
  CHECK(is_abelian(klein));
  CHECK(center(klein).order() == 4);
}

TEST_CASE("closures, normality and intersections") {
  const auto d4 = table("heisenberg,r=2,d=1");
  const Id x = id(d4, "x1"), y = id(d4, "y1");
  const auto hx = subgroup_closure(d4, {x});
  CHECK(hx.order() == 2);
  CHECK_FALSE(is_normal(d4, hx));
  CHECK(normal_closure(d4, {x}).order() == 4);
  CHECK(subgroup_closure(d4, {x, y}) == whole_group(d4));
  CHECK(intersection(normal_closure(d4, {x}), normal_closure(d4, {y})).order() == 2);
  CHECK(trivial_subgroup().order() == 1);
  CHECK(is_normal(d4, center(d4)));
}

TEST_CASE("commuting pairs and abelian subgroups") {
  const auto d4 = table("heisenberg,r=2,d=1");
  CHECK(commuting_pairs_exhaustive(d4).size() == 40);
  const auto klein = table("elementary_abelian,p=2,k=2");
  const auto bic = bicyclic_subgroups(klein);
  CHECK(bic.size() == 5);
  CHECK(std::count(bic.begin(), bic.end(), whole_group(klein)) == 1);

  bool cyclic4 = false, klein4 = false;
  for (const auto &h : bicyclic_subgroups(d4)) {
    if (h.order() != 4)
      continue;
    bool has4 = false;
    for (const Id m : h.members)
      has4 |= d4.element_order(m) == 4;
    (has4 ? cyclic4 : klein4) = true;
  }
  CHECK(cyclic4);
  CHECK(klein4);
  const auto maxab = maximal_abelian_subgroups(d4);
  CHECK(maxab.size() == 3);
  for (const auto &h : maxab)
    CHECK(h.order() == 4);
}

TEST_CASE("kernels: serial and parallel agree") {
  for (const std::string ref : {"heisenberg,r=2,d=1", "freest_special,d=4,p=2",
                                "freest_special,d=3,p=3", "heisenberg,r=4,d=2"}) {
    const auto g = table(ref);
    CHECK(kernels::commutator_set_serial(g) == kernels::commutator_set_parallel(g));
    CHECK(kernels::center_serial(g) == kernels::center_parallel(g));
    if (g.order() <= 1024)
      CHECK(kernels::commuting_pairs_serial(g) == kernels::commuting_pairs_parallel(g));
  }
}

TEST_CASE("bilinear commuting pairs agree with the exhaustive scan") {
  for (const std::string ref : {"heisenberg,r=2,d=1", "heisenberg,r=4,d=1",
                                "heisenberg,r=2,d=1:1", "freest_special,d=3,p=2",
                                "heisenberg,r=6,d=2", "heisenberg,r=3,d=1"}) {
    const auto g = pc(ref);
    REQUIRE(g->order() <= 512);
    const auto t = enumerate(g, 512);
    const auto exhaustive = commuting_pairs_exhaustive(t);
    const auto bp = commuting_pairs_bilinear(*g, 1u << 20);
    CHECK_MESSAGE(bp.pairs.size() * bp.tail_order * bp.tail_order == exhaustive.size(), ref);

    // Both pair sets generate the same subgroup of the wedge quotient. The
    // spelled expansion does not short-circuit the commuting root.
    WedgeEngine e(*g);
    const auto lat = relator_lattice(e);
    std::vector<WedgeVector> rows;
    for (const auto &[x, y] : exhaustive)
      rows.push_back(e.node(e.expand_words(g->to_word(t.element(x)), g->to_word(t.element(y))))
                         .result);
    const auto full = wedge_quotient(e, lat, rows);
    const auto fast = b0_class2(*g);
    CHECK_MESSAGE(full.invariants.to_string() == fast.invariants.to_string(), ref);
    CHECK(fast.invariants.order() == 1);
  }
}

TEST_CASE("nilpotency class and abelianization") {
  CHECK(nilpotency_class(*pc("phi15,p=5")) == 2);
  CHECK(nilpotency_class(*pc("phi28,p=5")) == 4);
  CHECK(nilpotency_class(*pc("phi29,p=7")) == 4);
  CHECK(nilpotency_class(*pc("cyclic,n=12")) == 1);
  CHECK(nilpotency_class(table("phi28,p=5")) == 4);
  CHECK(nilpotency_class(table("heisenberg,r=2,d=1")) == 2);
  CHECK(lower_central_series(*pc("phi28,p=5")).size() == 5);

  const auto ab15 = abelianization(*pc("phi15,p=5"));
  CHECK(ab15.invariants.to_string() == "Z/5 x Z/5 x Z/5 x Z/5");
  const auto ab28 = abelianization(*pc("phi28,p=5"));
  CHECK(ab28.invariants.order() == 125);
  CHECK(ab28.invariants.factors.size() == 2);
  CHECK(abelianization(*pc("heisenberg,r=2,d=1")).invariants.to_string() == "Z/2 x Z/2");
  CHECK(abelianization(*pc("cyclic,n=6")).invariants.order() == 6);
}

TEST_CASE("transgression image examples") {
  const auto d4 = table("heisenberg,r=2,d=1");
  CHECK(transgression_image(d4, center(d4)).order() == 1);
  CHECK(transgression_image(d4, whole_group(d4)).order() == 1);

  const auto fs = table("freest_special,d=4,p=2");
  const auto n = normal_closure(fs, {id(fs, "c1_2*c3_4")});
  CHECK(transgression_image(fs, n).to_string() == "Z/2");
  const auto k = commutator_set(fs);
  CHECK(transgression_image(fs, n, [&](Id x) { return k[x] != 0; }).to_string() == "Z/2");
  CHECK(transgression_image(fs, derived_subgroup(fs)).order() == 1);
  CHECK(quotient_invariants(fs, derived_subgroup(fs), trivial_subgroup()).order() == 64);
}

TEST_CASE("central product D4 o Z4") {
  const auto spec = CentralProductSpec::parse_json(R"({
    "left": "catalog:heisenberg,r=2,d=1", "right": "catalog:cyclic,n=4",
    "H1_gens": ["z"], "N1_gens": ["g^2"], "xi": [["z", "g^2"]]})",
                                                   ".");
  const CentralProduct cp(spec, 1u << 16);
  CHECK(cp.order() == 16);
  CHECK(cp.z().size() == 2);
  const auto g = cp.materialize(64);
  CHECK(g.order() == 16);
  CHECK(center(g).order() == 4);
  CHECK(derived_subgroup(g).order() == 2);
  CHECK(nilpotency_class(g) == 2);
  const auto res = central_product_b0(cp, spec, false, verify_b0_trivial);
  CHECK(res.invariants.order() == 1);
  CHECK(res.z_order == 2);
  CHECK(res.left_precondition == "oracle");
}

TEST_CASE("central product spec files") {
  const std::string dir = B0_DATA_DIR;
  const auto rai = CentralProductSpec::parse_json(read_file(dir + "/specs/rai_p2.json"), dir);
  const CentralProduct rcp(rai, 1u << 16);
  CHECK(rcp.order() == 1024 * 1024 / 2);
  const auto rres = central_product_b0(rcp, rai, false, verify_b0_trivial);
  CHECK(rres.invariants.to_string() == "Z/2");
  CHECK(rres.hypothesis_i);

  const auto glue =
      CentralProductSpec::parse_json(read_file(dir + "/specs/heisenberg_gluing.json"), dir);
  const auto gres = central_product_b0(CentralProduct(glue, 1u << 16), glue, false,
                                       verify_b0_trivial);
  CHECK(gres.invariants.order() == 1);

  const auto dp =
      CentralProductSpec::parse_json(read_file(dir + "/specs/direct_product.json"), dir);
  const CentralProduct dcp(dp, 1u << 16);
  CHECK(dcp.order() == 32);
  CHECK(central_product_b0(dcp, dp, false, verify_b0_trivial).invariants.order() == 1);

  CHECK_THROWS_AS(CentralProductSpec::parse_json(R"({"left": "catalog:cyclic,n=4"})", dir),
                  UsageError);
}

}

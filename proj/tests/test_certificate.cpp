#include "doctest.h"

#include <sstream>

#include "b0/catalog.hpp"
#include "b0/certificate.hpp"
#include "b0/error.hpp"
#include "json.hpp"

using namespace b0;
using json = nlohmann::json;

namespace {

struct Loaded {
  CatalogParams params;
  PcGroup group;
  Certificate cert;
};

Loaded load(const std::string &name, std::int64_t p) {
  const std::string dir = B0_DATA_DIR;
  const auto cert = Certificate::parse_json(read_file(dir + "/certs/" + name + ".json"));
  auto params = CatalogParams::parse(name + ",p=" + std::to_string(p));
  return {params, PcGroup(catalog(params)), cert};
}

CertificateRun run(const Loaded &l) {
  return verify_certificate(l.group, l.cert, certificate_symbols(&l.params));
}

std::vector<std::string> trace_lines(const CertificateRun &r) {
  std::ostringstream os;
  write_trace(os, r);
  std::istringstream is(os.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);)
    lines.push_back(line);
  return lines;
}

TraceAudit audit(const PcGroup &g, const std::vector<std::string> &lines) {
  std::ostringstream os;
  for (const auto &l : lines)
    os << l << '\n';
  std::istringstream is(os.str());
  return check_trace(g, is);
}

} // namespace

TEST_SUITE("certificate") {

TEST_CASE("the shipped certificates certify Phi28 and Phi29") {
  for (const std::string name : {"phi28", "phi29"})
    for (const std::int64_t p : {5, 7, 11}) {
      const auto l = load(name, p);
      const auto r = run(l);
      CHECK_MESSAGE(r.verdict == Verdict::certified_trivial, name << " p=" << p);
      REQUIRE(r.bound);
      CHECK(r.bound->invariants.order() == 1);
      CHECK(r.bound->tag == std::string(kSoundUpperBound));
      for (const auto &w : r.witnesses)
        CHECK(w.commutes);
      const auto a = audit(l.group, trace_lines(r));
      CHECK(a.ok());
      CHECK(a.trivial);
      CHECK(a.lattice_order == a.derived_order);
      CHECK(a.derived_order == static_cast<std::uint64_t>(p * p * p));
    }
}

TEST_CASE("non-commuting witnesses are rejected") {
  const auto l = load("phi28", 5);
  Certificate bad = l.cert;
  bad.witnesses.push_back({"a1", "a"});
  const auto r = verify_certificate(l.group, bad, certificate_symbols(&l.params));
  CHECK(r.verdict == Verdict::rejected);
  CHECK(r.reason.find("[a1, a] = a2 != 1") != std::string::npos);
  CHECK_THROWS_AS(b0_upper_bound(l.group, {{l.group.to_word(l.group.collect("a1")),
                                            l.group.to_word(l.group.collect("a"))}}),
                  UsageError);
  Certificate junk = l.cert;
  junk.witnesses = {{"a1*q", "a"}};
  CHECK(verify_certificate(l.group, junk, certificate_symbols(&l.params)).verdict ==
        Verdict::rejected);
}

TEST_CASE("empty certificates") {
  const auto params = CatalogParams::parse("cyclic,n=4 x cyclic,n=6");
  const PcGroup ab(catalog(params));
  Certificate empty;
  empty.group_ref = "catalog:" + params.to_string();
  CHECK(verify_certificate(ab, empty, certificate_symbols(&params)).verdict ==
        Verdict::certified_trivial);
  const auto h = CatalogParams::parse("heisenberg,r=2,d=1");
  CHECK(verify_certificate(PcGroup(catalog(h)), empty, certificate_symbols(&h)).verdict ==
        Verdict::certified_trivial);
}

TEST_CASE("the bound is monotone in the witnesses and one-sided") {
  const auto l = load("phi28", 5);
  const auto syms = certificate_symbols(&l.params);
  const auto &names = l.group.presentation().names;
  std::vector<std::pair<Word, Word>> ws;
  for (const auto &[u, v] : l.cert.witnesses)
    ws.emplace_back(parse_word(u, names, syms), parse_word(v, names, syms));

  const auto none = b0_upper_bound(l.group, {});
  const auto one = b0_upper_bound(l.group, {ws[0]});
  const auto two = b0_upper_bound(l.group, ws);
  CHECK(none.invariants.order() % one.invariants.order() == 0);
  CHECK(one.invariants.order() % two.invariants.order() == 0);
  CHECK(two.invariants.order() == 1);
  // Relators alone leave Z/5 although B0(Phi28) = 0: a nontrivial bound
  // proves nothing, and the verdict is inconclusive.
  CHECK(none.invariants.to_string() == "Z/5");
  Certificate empty = l.cert;
  empty.witnesses.clear();
  const auto r = verify_certificate(l.group, empty, syms);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(verdict_name(r.verdict) == "Inconclusive");
}

TEST_CASE("tampered traces are detected") {
  const auto l = load("phi28", 5);
  const auto r = run(l);
  const auto lines = trace_lines(r);
  REQUIRE(audit(l.group, lines).ok());

  std::size_t split = 0;
  for (std::size_t k = 1; k < lines.size(); ++k)
    if (json::parse(lines[k]).value("rule", "") == "SPLIT-L") {
      split = k;
      break;
    }
  REQUIRE(split != 0);

  auto changed = lines;
  json j = json::parse(changed[split]);
  j["result"][0] = j["result"][0].get<std::int64_t>() + 1;
  changed[split] = j.dump();
  CHECK_FALSE(audit(l.group, changed).ok());

  auto renamed = lines;
  j = json::parse(renamed[split]);
  j["rule"] = "BASE";
  renamed[split] = j.dump();
  CHECK_FALSE(audit(l.group, renamed).ok());

  // A forged witness root on a non-commuting node.
  auto forged = lines;
  std::size_t noncomm = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const json n = json::parse(lines[k]);
    if (n.contains("root") || n["rule"] != "BASE")
      continue;
    const Element u = l.group.collect(n["u"].get<std::string>());
    const Element v = l.group.collect(n["v"].get<std::string>());
    if (!l.group.is_identity(l.group.commutator(u, v))) {
      noncomm = n["node"].get<std::size_t>();
      break;
    }
  }
  REQUIRE(noncomm != 0);
  forged.push_back(json{{"rule", "COMMUTE-ZERO"}, {"root", "witness"}, {"node", noncomm}}.dump());
  CHECK_FALSE(audit(l.group, forged).ok());

  // Dropping the witness roots leaves a consistent trace without a proof.
  std::vector<std::string> dropped;
  for (const auto &line : lines)
    if (line.find("\"witness\"") == std::string::npos)
      dropped.push_back(line);
  const auto a = audit(l.group, dropped);
  CHECK(a.ok());
  CHECK_FALSE(a.trivial);

  auto garbage = lines;
  garbage.push_back("{not json");
  CHECK_FALSE(audit(l.group, garbage).ok());
}

TEST_CASE("certificate parsing") {
  CHECK_THROWS_AS(Certificate::parse_json("[]"), UsageError);
  CHECK_THROWS_AS(Certificate::parse_json("{"), UsageError);
  CHECK_THROWS_AS(Certificate::parse_json(R"({"group": "catalog:phi28", "witnesses": 3})"),
                  UsageError);
  CHECK_THROWS_AS(
      Certificate::parse_json(R"({"group": "catalog:phi28", "witnesses": [], "expect": "Z/2"})"),
      UsageError);
  const auto c = Certificate::parse_json(
      R"({"group": "catalog:phi28", "witnesses": [["a3*a", "a*a1^p"]]})");
  CHECK(c.witnesses.size() == 1);
  CHECK(c.expect == "trivial");

  const auto p29 = CatalogParams::parse("phi29,p=7");
  const auto syms = certificate_symbols(&p29);
  CHECK(syms.at("p") == 7);
  CHECK(syms.at("nu") == 3);
  CHECK(syms.at("s") == 5);
  CHECK(syms.at("g") == 3);
}

}

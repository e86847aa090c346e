#include "b0/certificate.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "b0/error.hpp"
#include "b0/pc_subgroup.hpp"

namespace b0 {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kMaxDerived = 2'000'000;

struct Built {
  std::unique_ptr<WedgeEngine> engine;
  WedgeLattice lattice;
  std::vector<std::size_t> witness_roots;
  UpperBound bound;
};

Built build(const PcGroup &g, const std::vector<std::pair<Word, Word>> &witnesses) {
  Built b;
  b.engine = std::make_unique<WedgeEngine>(g);
  b.lattice = relator_lattice(*b.engine);
  std::vector<WedgeVector> extra;
  for (const auto &[u, v] : witnesses) {
    const std::size_t root = b.engine->expand_words(u, v);
    b.witness_roots.push_back(root);
    extra.push_back(b.engine->node(root).result);
  }
  b.bound.detail = wedge_quotient(*b.engine, b.lattice, extra);
  b.bound.invariants = b.bound.detail.invariants;
  return b;
}

} // namespace

Certificate Certificate::parse_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw UsageError(std::string("certificate: ") + e.what());
  }
  if (!j.is_object() || !j.contains("group") || !j["group"].is_string())
    throw UsageError("certificate: expected an object with a 'group' string");
  Certificate c;
  c.group_ref = j["group"].get<std::string>();
  if (j.contains("witnesses")) {
    if (!j["witnesses"].is_array())
      throw UsageError("certificate: 'witnesses' must be an array of [u, v] pairs");
    for (const auto &w : j["witnesses"]) {
      if (!w.is_array() || w.size() != 2 || !w[0].is_string() || !w[1].is_string())
        throw UsageError("certificate: 'witnesses' must be an array of [u, v] pairs");
      c.witnesses.emplace_back(w[0].get<std::string>(), w[1].get<std::string>());
    }
  }
  if (j.contains("expect")) {
    c.expect = j["expect"].get<std::string>();
    if (c.expect != "trivial")
      throw UsageError("certificate: only \"expect\": \"trivial\" is supported");
  }
  return c;
}

ExponentSymbols certificate_symbols(const CatalogParams *params) {
  ExponentSymbols s;
  if (!params || params->p < 2)
    return s;
  const std::int64_t p = params->p;
  const std::int64_t nu = params->family == "phi29" ? smallest_nonresidue(p) : 1;
  s["p"] = p;
  s["nu"] = nu;
  s["s"] = inverse_mod(nu, p);
  if (is_prime(p))
    s["g"] = smallest_primitive_root(p);
  return s;
}

std::string verdict_name(Verdict v) {
  switch (v) {
  case Verdict::certified_trivial:
    return "Certified-Trivial";
  case Verdict::inconclusive:
    return "Inconclusive";
  case Verdict::rejected:
    return "Rejected";
  }
  return "?";
}

std::vector<WitnessCheck> check_witnesses(const PcGroup &g, const Certificate &cert,
                                          const ExponentSymbols &symbols) {
  std::vector<WitnessCheck> out;
  const auto &names = g.presentation().names;
  for (const auto &[ut, vt] : cert.witnesses) {
    WitnessCheck w;
    w.u_text = ut;
    w.v_text = vt;
    w.u = parse_word(ut, names, symbols);
    w.v = parse_word(vt, names, symbols);
    const Element c = g.commutator(g.collect(w.u), g.collect(w.v));
    w.commutes = g.is_identity(c);
    w.commutator = g.format(c);
    out.push_back(std::move(w));
  }
  return out;
}

UpperBound b0_upper_bound(const PcGroup &g, const std::vector<std::pair<Word, Word>> &witnesses) {
  const auto &names = g.presentation().names;
  for (const auto &[u, v] : witnesses) {
    const Element c = g.commutator(g.collect(u), g.collect(v));
    if (!g.is_identity(c))
      throw UsageError("witness pair (" + format_word(u, names) + ", " + format_word(v, names) +
                       ") does not commute: commutator " + g.format(c));
  }
  return build(g, witnesses).bound;
}

CertificateRun verify_certificate(const PcGroup &g, const Certificate &cert,
                                  const ExponentSymbols &symbols) {
  CertificateRun run;
  try {
    run.witnesses = check_witnesses(g, cert, symbols);
  } catch (const UsageError &e) {
    run.verdict = Verdict::rejected;
    run.reason = std::string("witness does not parse: ") + e.what();
    return run;
  }
  std::vector<std::pair<Word, Word>> pairs;
  for (const auto &w : run.witnesses) {
    if (!w.commutes) {
      run.verdict = Verdict::rejected;
      run.reason = "[" + w.u_text + ", " + w.v_text + "] = " + w.commutator + " != 1";
      return run;
    }
    pairs.emplace_back(w.u, w.v);
  }
  Built b = build(g, pairs);
  run.engine = std::move(b.engine);
  run.lattice = std::move(b.lattice);
  run.witness_roots = std::move(b.witness_roots);
  run.bound = std::move(b.bound);
  if (run.bound->invariants.is_trivial()) {
    run.verdict = Verdict::certified_trivial;
  } else {
    run.verdict = Verdict::inconclusive;
    run.reason = "upper bound " + run.bound->invariants.to_string() + " is not trivial";
  }
  return run;
}

void write_trace(std::ostream &out, const CertificateRun &run) {
  if (!run.engine)
    return;
  const WedgeEngine &e = *run.engine;
  const auto &names = e.group().presentation().names;
  const auto word = [&](const Word &w) { return format_word(w, names); };
  json head{{"group", e.group().presentation().name}, {"dim", e.dim()}};
  json gens = json::array();
  for (const auto &n : names)
    gens.push_back(n);
  head["generators"] = gens;
  out << head.dump() << '\n';
  for (std::size_t id = 0; id < e.nodes().size(); ++id) {
    const TraceNode &n = e.node(id);
    json j{{"node", id}, {"rule", rule_tag(n.rule)}, {"u", word(n.u)}, {"v", word(n.v)}};
    if (n.rule == Rule::inv_l || n.rule == Rule::inv_r)
      j["side"] = n.rule == Rule::inv_l ? "L" : "R";
    if (n.rule == Rule::split_l || n.rule == Rule::split_r || n.rule == Rule::inv_l ||
        n.rule == Rule::inv_r)
      j["a"] = word(n.a);
    if (n.rule == Rule::split_l || n.rule == Rule::split_r)
      j["b"] = word(n.b);
    json ch = json::array();
    for (const auto &[c, coef] : n.children)
      ch.push_back({c, coef});
    j["children"] = ch;
    j["result"] = n.result;
    out << j.dump() << '\n';
  }
  const WedgeLattice &lat = run.lattice;
  for (std::size_t k = 0; k < lat.relations.size(); ++k) {
    json j;
    if (lat.roots[k] == kNoNode)
      j = {{"rule", "COMMUTE-ZERO"}, {"root", "generators"}, {"i", lat.pairs[k].first},
           {"j", lat.pairs[k].second}};
    else
      j = {{"rule", "RELATOR"}, {"root", "relator"}, {"node", lat.roots[k]}};
    j["source"] = lat.sources[k];
    out << j.dump() << '\n';
  }
  for (std::size_t k = 0; k < run.witness_roots.size(); ++k) {
    const auto &w = run.witnesses[k];
    json j{{"rule", "COMMUTE-ZERO"},
           {"root", "witness"},
           {"node", run.witness_roots[k]},
           {"source", "witness (" + w.u_text + ", " + w.v_text + ")"}};
    out << j.dump() << '\n';
  }
}

namespace {

struct CheckedNode {
  Element u, v;
  WedgeVector result;
};

class TraceChecker {
public:
  TraceChecker(const PcGroup &g, TraceAudit &audit) : g_(g), audit_(audit) {}

  void line(std::size_t lineno, const json &j) {
    lineno_ = lineno;
    if (j.contains("dim")) {
      dim_ = j["dim"].get<std::size_t>();
      if (dim_ != g_.rank() * (g_.rank() - 1) / 2)
        fail("dimension does not match the group");
      return;
    }
    if (j.contains("node") && !j.contains("root"))
      node(j);
    else if (j.contains("root"))
      root(j);
    else
      fail("unrecognized line");
  }

  void finish() {
    // The additive model of the quotient needs an abelian G'.
    if (!derived_subgroup_pc(g_).is_abelian())
      audit_.failures.push_back("derived subgroup is not abelian");
    if (relations_.empty() && dim_ > 0) {
      audit_.lattice_order = 0;
    } else if (dim_ == 0) {
      audit_.lattice_order = 1;
    } else {
      const auto diag = zl::smith_diagonal(zl::IntMatrix::from_rows(relations_, dim_));
      zl::Integer order = 1;
      std::size_t rank = 0;
      for (const auto &d : diag)
        if (d != 0) {
          order *= abs(d);
          ++rank;
        }
      audit_.lattice_order =
          rank == dim_ && order <= zl::Integer(UINT64_MAX) ? static_cast<std::uint64_t>(order) : 0;
    }
    audit_.derived_order = derived_order();
    audit_.trivial = audit_.ok() && audit_.lattice_order != 0 &&
                     audit_.lattice_order == audit_.derived_order;
  }

private:
  void fail(const std::string &msg) {
    audit_.failures.push_back("line " + std::to_string(lineno_) + ": " + msg);
  }

  Element elem(const json &j, const char *key) {
    return g_.collect(parse_word(j.at(key).get<std::string>(), g_.presentation().names));
  }

  const CheckedNode *child(std::size_t id) {
    const auto it = nodes_.find(id);
    if (it == nodes_.end()) {
      fail("child " + std::to_string(id) + " is not an earlier node");
      return nullptr;
    }
    return &it->second;
  }

  // Child k must be the wedge (x, y).
  bool expect_child(const std::vector<const CheckedNode *> &ch, std::size_t k, const Element &x,
                    const Element &y) {
    if (ch[k]->u != x || ch[k]->v != y) {
      fail("child " + std::to_string(k) + " is not the wedge the rule requires");
      return false;
    }
    return true;
  }

  void node(const json &j) {
    ++audit_.nodes_checked;
    const std::size_t id = j["node"].get<std::size_t>();
    if (nodes_.count(id)) {
      fail("duplicate node " + std::to_string(id));
      return;
    }
    CheckedNode n;
    n.u = elem(j, "u");
    n.v = elem(j, "v");
    n.result = j["result"].get<WedgeVector>();
    if (n.result.size() != dim_) {
      fail("result has the wrong length");
      return;
    }
    const std::string rule = j["rule"].get<std::string>();
    std::vector<const CheckedNode *> ch;
    std::vector<std::int64_t> coef;
    for (const auto &c : j["children"]) {
      const std::size_t cid = c[0].get<std::size_t>();
      if (cid >= id) {
        fail("child " + std::to_string(cid) + " does not precede node " + std::to_string(id));
        return;
      }
      const CheckedNode *cn = child(cid);
      if (!cn)
        return;
      ch.push_back(cn);
      coef.push_back(c[1].get<std::int64_t>());
    }
    const auto arity = [&](std::size_t k, std::int64_t c) {
      if (ch.size() != k || std::any_of(coef.begin(), coef.end(), [&](auto x) { return x != c; })) {
        fail(rule + " node " + std::to_string(id) + " has the wrong children");
        return false;
      }
      return true;
    };
    bool ok = true;
    if (rule == "SPLIT-L" || rule == "SPLIT-R") {
      const Element a = elem(j, "a"), b = elem(j, "b");
      if (!arity(3, 1))
        return;
      if (rule == "SPLIT-L") {
        // ab ^ v = a ^ v + [a,v] ^ b + b ^ v
        ok = n.u == g_.multiply(a, b) && expect_child(ch, 0, a, n.v) &&
             expect_child(ch, 1, g_.commutator(a, n.v), b) && expect_child(ch, 2, b, n.v);
      } else {
        // u ^ ab = u ^ b + u ^ a + [u,a] ^ b
        ok = n.v == g_.multiply(a, b) && expect_child(ch, 0, n.u, b) &&
             expect_child(ch, 1, n.u, a) && expect_child(ch, 2, g_.commutator(n.u, a), b);
      }
    } else if (rule == "INV") {
      const Element a = elem(j, "a");
      if (!arity(2, -1))
        return;
      const std::string side = j.value("side", "");
      if (side == "L") {
        // a^-1 ^ v = -(a ^ v) - [a,v] ^ a^-1
        ok = n.u == g_.inverse(a) && expect_child(ch, 0, a, n.v) &&
             expect_child(ch, 1, g_.commutator(a, n.v), n.u);
      } else if (side == "R") {
        // u ^ a^-1 = -(u ^ a) - [u,a] ^ a^-1
        ok = n.v == g_.inverse(a) && expect_child(ch, 0, n.u, a) &&
             expect_child(ch, 1, g_.commutator(n.u, a), n.v);
      } else {
        ok = false;
      }
    } else if (rule == "COMMUTE-ZERO") {
      ok = ch.empty() && g_.is_identity(g_.commutator(n.u, n.v)) &&
           std::all_of(n.result.begin(), n.result.end(), [](auto x) { return x == 0; });
    } else if (rule == "BASE") {
      const Word uw = parse_word(j["u"].get<std::string>(), g_.presentation().names);
      const Word vw = parse_word(j["v"].get<std::string>(), g_.presentation().names);
      ok = ch.empty() && uw.size() == 1 && vw.size() == 1 && uw[0].exp == 1 && vw[0].exp == 1;
      if (ok) {
        WedgeVector want(dim_, 0);
        const std::size_t i = uw[0].gen, k = vw[0].gen;
        if (i > k)
          want[i * (i - 1) / 2 + k] = 1;
        else if (i < k)
          want[k * (k - 1) / 2 + i] = -1;
        ok = want == n.result;
      }
    } else {
      fail("unknown rule " + rule);
      return;
    }
    if (!ok) {
      fail(rule + " node " + std::to_string(id) + " does not replay");
      return;
    }
    if (!ch.empty()) {
      WedgeVector sum(dim_, 0);
      for (std::size_t k = 0; k < ch.size(); ++k)
        for (std::size_t c = 0; c < dim_; ++c)
          sum[c] += coef[k] * ch[k]->result[c];
      if (sum != n.result) {
        fail(rule + " node " + std::to_string(id) + " result is not the sum of its children");
        return;
      }
    }
    nodes_[id] = std::move(n);
  }

  void root(const json &j) {
    ++audit_.roots_checked;
    const std::string kind = j["root"].get<std::string>();
    if (kind == "generators") {
      const std::size_t i = j["i"].get<std::size_t>(), k = j["j"].get<std::size_t>();
      if (i <= k || i >= g_.rank() ||
          !g_.is_identity(g_.commutator(g_.generator(i), g_.generator(k)))) {
        fail("generators " + std::to_string(i) + ", " + std::to_string(k) + " do not commute");
        return;
      }
      WedgeVector v(dim_, 0);
      v[i * (i - 1) / 2 + k] = 1;
      relations_.push_back(std::move(v));
      return;
    }
    const auto it = nodes_.find(j["node"].get<std::size_t>());
    if (it == nodes_.end()) {
      fail("root refers to an unchecked node");
      return;
    }
    const CheckedNode &n = it->second;
    if (kind == "relator") {
      // 1 ^ v = 0: the relator collects to the identity.
      if (!g_.is_identity(n.u) && !g_.is_identity(n.v)) {
        fail("relator root does not collect to 1");
        return;
      }
    } else if (kind == "witness") {
      if (!g_.is_identity(g_.commutator(n.u, n.v))) {
        fail("witness root does not commute");
        return;
      }
    } else {
      fail("unknown root kind " + kind);
      return;
    }
    relations_.push_back(n.result);
  }

  // |<[g_i, g_j]>| by closure; a subgroup of G' is enough for soundness
  // since it bounds |G'| from below.
  std::uint64_t derived_order() const {
    std::vector<Element> images;
    for (std::size_t i = 0; i < g_.rank(); ++i)
      for (std::size_t k = 0; k < i; ++k) {
        const Element c = g_.commutator(g_.generator(i), g_.generator(k));
        if (!g_.is_identity(c))
          images.push_back(c);
      }
    std::set<Element> seen{g_.identity()};
    std::vector<Element> queue{g_.identity()};
    for (std::size_t t = 0; t < queue.size(); ++t)
      for (const auto &c : images) {
        Element y = g_.multiply(queue[t], c);
        if (seen.insert(y).second) {
          if (seen.size() > kMaxDerived)
            throw CapExceeded("enumerating the derived subgroup", seen.size(), kMaxDerived);
          queue.push_back(std::move(y));
        }
      }
    return queue.size();
  }

  const PcGroup &g_;
  TraceAudit &audit_;
  std::size_t lineno_ = 0;
  std::size_t dim_ = 0;
  std::map<std::size_t, CheckedNode> nodes_;
  std::vector<WedgeVector> relations_;
};

} // namespace

TraceAudit check_trace(const PcGroup &g, std::istream &trace) {
  TraceAudit audit;
  TraceChecker checker(g, audit);
  std::string text;
  std::size_t lineno = 0;
  while (std::getline(trace, text)) {
    ++lineno;
    if (text.empty())
      continue;
    try {
      checker.line(lineno, json::parse(text));
    } catch (const std::exception &e) {
      audit.failures.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  checker.finish();
  return audit;
}

} // namespace b0

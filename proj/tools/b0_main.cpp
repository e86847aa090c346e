// b0: Bogomolov multipliers of finite p-groups from the command line.
// JSON on stdout, human log on stderr. Exit codes: 0 success, 2 usage,
// 3 inconclusive, 4 resource cap or out of range, 5 internal assertion.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "b0/catalog.hpp"
#include "b0/central_product.hpp"
#include "b0/certificate.hpp"
#include "b0/cohomology.hpp"
#include "b0/dsl.hpp"
#include "b0/error.hpp"
#include "b0/groupkit.hpp"
#include "b0/pc_subgroup.hpp"
#include "b0/suite.hpp"
#include "b0/wedge.hpp"

#ifndef B0_DATA_DIR
#define B0_DATA_DIR "."
#endif

namespace {

using json = nlohmann::json;
using namespace b0;
using Clock = std::chrono::steady_clock;

constexpr const char *kVersion = "1.0.0";
constexpr int kExitInconclusive = 3;

// A method whose preconditions the group does not meet.
class OutOfRange : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

json factors_json(const zl::AbelianInvariants &a) {
  json out = json::array();
  for (const auto &f : a.factors) {
    if (f <= zl::Integer(UINT64_MAX))
      out.push_back(static_cast<std::uint64_t>(f));
    else
      out.push_back(f.str());
  }
  return out;
}

// Group selection shared by the subcommands.
struct Source {
  std::string family, ref, file, table;
  std::vector<std::int64_t> p_values; // --p; paper-suite accepts several
  std::int64_t r = 0, rank = 0, n = 0, k = 0;
  std::vector<std::int64_t> d;
  std::vector<std::string> factors;

  void add_params(CLI::App *app, bool multi_p = false) {
    auto *po = app->add_option("--p", p_values, "prime p");
    if (!multi_p)
      po->expected(1);
    app->add_option("--r", r, "Heisenberg modulus r");
    app->add_option("--d", d, "Heisenberg chain d_1 ... d_n (or freest special rank)")
        ->delimiter(',');
    app->add_option("--rank", rank, "freest special rank d");
    app->add_option("--k", k, "elementary abelian rank");
    app->add_option("--n", n, "cyclic order");
    app->add_option("--factor", factors, "direct product factor (catalog reference)");
  }

  void add(CLI::App *app) {
    app->add_option("--catalog", family, "catalog family");
    app->add_option("--ref", ref, "catalog reference such as \"phi28,p=5\"");
    app->add_option("--file", file, "pc presentation file");
    app->add_option("--table", table, "JSON multiplication table");
    add_params(app);
  }

  bool given() const { return !family.empty() || !ref.empty() || !file.empty() || !table.empty(); }

  CatalogParams params() const {
    if (!ref.empty())
      return CatalogParams::parse(ref);
    std::string s = family;
    if (family == "direct_product") {
      if (factors.size() < 2)
        throw UsageError("direct_product needs at least two --factor references");
      s.clear();
      for (std::size_t i = 0; i < factors.size(); ++i)
        s += (i ? " x " : "") + factors[i];
      return CatalogParams::parse(s);
    }
    if (!p_values.empty())
      s += ",p=" + std::to_string(p_values.front());
    if (r)
      s += ",r=" + std::to_string(r);
    if (!d.empty()) {
      if (family == "freest_special") {
        s += ",d=" + std::to_string(d.front());
      } else {
        s += ",d=";
        for (std::size_t i = 0; i < d.size(); ++i)
          s += (i ? ":" : "") + std::to_string(d[i]);
      }
    }
    if (rank)
      s += ",d=" + std::to_string(rank);
    if (k)
      s += ",k=" + std::to_string(k);
    if (n)
      s += ",n=" + std::to_string(n);
    return CatalogParams::parse(s);
  }

  // nullptr for --table sources.
  std::shared_ptr<const PcGroup> load(CatalogParams *out_params = nullptr) const {
    const int count = !family.empty() + !ref.empty() + !file.empty() + !table.empty();
    if (count != 1)
      throw UsageError("select exactly one of --catalog, --ref, --file, --table");
    if (!table.empty())
      return nullptr;
    if (!file.empty())
      return std::make_shared<const PcGroup>(parse_pc(read_file(file)));
    const CatalogParams c = params();
    if (out_params)
      *out_params = c;
    return std::make_shared<const PcGroup>(catalog(c));
  }

  std::string describe() const {
    if (!file.empty())
      return "file:" + file;
    if (!table.empty())
      return "table:" + table;
    return "catalog:" + params().to_string();
  }
};

json group_json(const PcGroup &g, const std::string &source) {
  return {{"name", g.presentation().name},
          {"source", source},
          {"order", g.order()},
          {"rank", g.rank()},
          {"class", nilpotency_class_pc(g)}};
}

struct Output {
  bool timing = false;
  Clock::time_point start = Clock::now();

  int emit(json report, int code) const {
    report["engine_version"] = std::string("b0 ") + kVersion;
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    if (timing)
      report["wall_clock_s"] = s;
    std::cout << report.dump(2) << '\n';
    std::cerr << "done in " << s << " s\n";
    return code;
  }
};

// ---- catalog ----

int cmd_catalog(const std::string &family, const Source &src) {
  Source s = src;
  s.family = family;
  const PcPresentation pres = catalog(s.params());
  std::cout << emit_pc(pres);
  return 0;
}

// ---- info ----

int cmd_info(const Source &src, const Output &out) {
  json r;
  if (!src.table.empty()) {
    const GroupTable t = GroupTable::parse_json(read_file(src.table));
    r["group"] = {{"source", src.describe()}, {"order", t.order()}};
    r["class"] = nilpotency_class(t);
    r["abelian"] = is_abelian(t);
    r["derived_order"] = derived_subgroup(t).order();
    r["center_order"] = center(t).order();
    r["commutator_closed"] = is_commutator_closed(t);
    return out.emit(r, 0);
  }
  const auto g = src.load();
  r["group"] = group_json(*g, src.describe());
  r["consistent"] = g->consistency().consistent();
  const PcSubgroup derived = derived_subgroup_pc(*g);
  r["derived_order"] = derived.order();
  r["derived_abelian"] = derived.is_abelian();
  r["abelianization"] = factors_json(abelianization(*g).invariants);
  constexpr std::uint64_t kInfoCap = 1 << 12;
  if (g->order() <= kInfoCap) {
    const GroupTable t = enumerate(g, kInfoCap);
    r["center_order"] = center(t).order();
    r["commutator_closed"] = is_commutator_closed(t);
  }
  return out.emit(r, 0);
}

// ---- b0 ----

struct CertRunOutcome {
  json report;
  int code = 0;
};

// Runs a certificate and replays its trace through the independent checker.
CertRunOutcome run_certificate(const PcGroup &g, const Certificate &cert,
                               const ExponentSymbols &symbols, const std::string &trace_path) {
  CertRunOutcome o;
  const CertificateRun run = verify_certificate(g, cert, symbols);
  json &r = o.report;
  r["method"] = "upper-bound-certificate";
  r["tag"] = kSoundUpperBound;
  r["verdict"] = verdict_name(run.verdict);
  json ws = json::array();
  for (const auto &w : run.witnesses)
    ws.push_back({{"u", w.u_text},
                  {"v", w.v_text},
                  {"commutes", w.commutes},
                  {"commutator", w.commutator}});
  r["witnesses"] = ws;
  if (!run.reason.empty())
    r["reason"] = run.reason;
  if (run.verdict == Verdict::rejected) {
    r["factors"] = nullptr;
    o.code = 2;
    return o;
  }
  const auto &bound = *run.bound;
  r["upper_bound"] = factors_json(bound.invariants);
  r["derived_order"] = bound.detail.derived_order;
  r["relations"] = bound.detail.relation_count;
  r["trace_nodes"] = run.engine->nodes().size();

  std::stringstream trace;
  write_trace(trace, run);
  if (!trace_path.empty()) {
    std::ofstream f(trace_path);
    if (!f)
      throw UsageError("cannot write " + trace_path);
    f << trace.str();
  }
  const TraceAudit audit = check_trace(g, trace);
  r["audit"] = {{"nodes_checked", audit.nodes_checked},
                {"roots_checked", audit.roots_checked},
                {"failures", audit.failures},
                {"lattice_order", audit.lattice_order},
                {"derived_order", audit.derived_order}};
  if (run.verdict == Verdict::certified_trivial) {
    if (!audit.ok() || !audit.trivial)
      throw InternalError("certificate trace does not replay: " +
                          (audit.failures.empty() ? std::string("orders differ")
                                                  : audit.failures.front()));
    r["factors"] = json::array();
    o.code = 0;
  } else {
    // An upper bound that is not trivial proves nothing.
    r["factors"] = nullptr;
    o.code = kExitInconclusive;
  }
  return o;
}

int cmd_b0(const Source &src, const std::string &method_in, const std::string &cert_path,
           const std::string &trace_path, const Output &out) {
  std::string method = method_in;
  if (!cert_path.empty() && method == "auto")
    method = "auto-cert";
  json r;
  if (!src.table.empty()) {
    if (method != "auto" && method != "oracle")
      throw UsageError("multiplication tables support only the oracle");
    const GroupTable t = GroupTable::parse_json(read_file(src.table));
    const auto res = b0_oracle(t, SubgroupMode::abelian);
    r["group"] = {{"source", src.describe()}, {"order", t.order()}};
    r["method"] = "oracle";
    r["tag"] = "exact";
    r["factors"] = factors_json(res.b0);
    r["verdict"] = res.b0.is_trivial() ? "trivial" : "nontrivial";
    r["schur_multiplier_dual"] = factors_json(res.h2);
    return out.emit(r, 0);
  }
  CatalogParams params;
  const auto g = src.load(&params);
  r["group"] = group_json(*g, src.describe());
  const int cls = nilpotency_class_pc(*g);
  const std::uint64_t cap = oracle_cap();

  if (method == "auto" || method == "auto-cert") {
    if (g->order() <= cap)
      method = "oracle";
    else if (cls <= 2)
      method = "class2";
    else if (method == "auto-cert")
      method = "cert";
    else {
      r["method"] = "none";
      r["verdict"] = "Inconclusive";
      r["factors"] = nullptr;
      r["hint"] = "order exceeds the oracle cap and class > 2; supply a certificate with --cert";
      std::cerr << "inconclusive: " << r["hint"].get<std::string>() << '\n';
      return out.emit(r, kExitInconclusive);
    }
  }

  if (method == "oracle") {
    if (g->order() > cap)
      throw CapExceeded("the cohomological oracle", g->order(), cap);
    const auto res = b0_oracle(enumerate(g, cap), SubgroupMode::abelian);
    r["method"] = "oracle";
    r["tag"] = "exact";
    r["factors"] = factors_json(res.b0);
    r["verdict"] = res.b0.is_trivial() ? "trivial" : "nontrivial";
    r["schur_multiplier_dual"] = factors_json(res.h2);
    r["subgroups_checked"] = res.subgroups_checked;
    return out.emit(r, 0);
  }
  if (method == "class2") {
    if (cls > 2)
      throw OutOfRange("the class-2 engine needs class <= 2 (class " + std::to_string(cls) + ")");
    const auto res = b0_class2(*g);
    r["method"] = "class2";
    r["tag"] = "exact";
    r["factors"] = factors_json(res.invariants);
    r["verdict"] = res.invariants.is_trivial() ? "trivial" : "nontrivial";
    r["derived_order"] = res.derived_order;
    r["commuting_pairs"] = res.commuting_pairs;
    r["relations"] = res.relation_count;
    return out.emit(r, 0);
  }
  if (method == "cert") {
    if (cert_path.empty())
      throw UsageError("--method cert needs --cert FILE");
    const Certificate cert = Certificate::parse_json(read_file(cert_path));
    const std::string prefix = "catalog:";
    if (cert.group_ref.rfind(prefix, 0) == 0 && !params.family.empty()) {
      const std::string fam = cert.group_ref.substr(prefix.size(), cert.group_ref.find(',') -
                                                                       prefix.size());
      if (fam != params.family)
        throw UsageError("certificate is for " + fam + ", not " + params.family);
    }
    auto o = run_certificate(*g, cert, certificate_symbols(&params), trace_path);
    o.report["group"] = r["group"];
    return out.emit(o.report, o.code);
  }
  throw UsageError("unknown method '" + method + "' (auto, oracle, class2, cert)");
}

// ---- verify ----

int cmd_verify(const std::string &cert_path, const Source &src, const std::string &trace_path,
               const std::string &replay_path, const Output &out) {
  const Certificate cert = Certificate::parse_json(read_file(cert_path));
  CatalogParams params;
  std::shared_ptr<const PcGroup> g;
  std::string source;
  if (src.given()) {
    g = src.load(&params);
    source = src.describe();
  } else {
    std::string ref = cert.group_ref;
    if (ref.rfind("catalog:", 0) == 0 && ref.find("p=") == std::string::npos &&
        !src.p_values.empty())
      ref += ",p=" + std::to_string(src.p_values.front());
    const auto base = std::filesystem::path(cert_path).parent_path().string();
    g = load_group_ref(ref, base, &params);
    source = ref;
  }
  if (!g)
    throw UsageError("certificates need a pc group");
  if (!replay_path.empty()) {
    std::ifstream f(replay_path);
    if (!f)
      throw UsageError("cannot read " + replay_path);
    const TraceAudit audit = check_trace(*g, f);
    json r{{"group", group_json(*g, source)},
           {"method", "trace-replay"},
           {"tag", kSoundUpperBound},
           {"nodes_checked", audit.nodes_checked},
           {"roots_checked", audit.roots_checked},
           {"failures", audit.failures},
           {"lattice_order", audit.lattice_order},
           {"derived_order", audit.derived_order},
           {"verdict", !audit.ok() ? "Rejected"
                       : audit.trivial ? "Certified-Trivial"
                                       : "Inconclusive"}};
    return out.emit(r, !audit.ok() ? 2 : audit.trivial ? 0 : kExitInconclusive);
  }
  auto o = run_certificate(*g, cert, certificate_symbols(&params), trace_path);
  o.report["group"] = group_json(*g, source);
  if (o.code == 2)
    std::cerr << "rejected: " << o.report.value("reason", std::string()) << '\n';
  return out.emit(o.report, o.code);
}

// ---- central-product ----

int cmd_central_product(const std::string &spec_path, bool asserted, std::uint64_t factor_cap,
                        const Output &out) {
  const auto base = std::filesystem::path(spec_path).parent_path().string();
  const auto spec = CentralProductSpec::parse_json(read_file(spec_path), base);
  const CentralProduct cp(spec, factor_cap);
  const auto res = central_product_b0(cp, spec, asserted, verify_b0_trivial);
  json r;
  r["group"] = {{"left", spec.left_ref},
                {"right", spec.right_ref},
                {"order", cp.order()},
                {"glued_order", cp.h1().order()}};
  r["method"] = "central-product-formula";
  r["tag"] = "exact";
  r["factors"] = factors_json(res.invariants);
  r["verdict"] = res.invariants.is_trivial() ? "trivial" : "nontrivial";
  r["z_order"] = res.z_order;
  r["z_derived_order"] = res.z_derived_order;
  r["z_k_order"] = res.z_k_order;
  r["hypothesis_i"] = res.hypothesis_i;
  r["hypothesis_ii"] = res.hypothesis_ii ? json(*res.hypothesis_ii) : json(nullptr);
  r["preconditions"] = {{"left", res.left_precondition}, {"right", res.right_precondition}};
  return out.emit(r, 0);
}

// ---- transgression ----

int cmd_transgression(const Source &src, const std::vector<std::string> &normal_words,
                      const Output &out) {
  const auto g = src.load();
  if (!g)
    throw UsageError("transgression needs a pc group");
  constexpr std::uint64_t kCap = 1 << 16;
  const GroupTable t = enumerate(g, kCap);
  std::vector<Id> gens;
  for (const auto &w : normal_words)
    gens.push_back(t.id_of(g->collect(w)));
  const Subgroup n = subgroup_closure(t, gens);
  if (!is_normal(t, n))
    throw UsageError("the subgroup generated by --normal is not normal");
  const auto inv = transgression_image(t, n);
  json r;
  r["group"] = group_json(*g, src.describe());
  r["normal_order"] = n.order();
  r["method"] = "transgression-lower-bound";
  r["tag"] = "lower-bound";
  r["factors"] = factors_json(inv);
  r["verdict"] = inv.is_trivial() ? "trivial" : "nontrivial";
  r["note"] = "this group embeds into B0(G/N)";
  return out.emit(r, 0);
}

// ---- paper-suite ----

int cmd_paper_suite(const std::vector<std::int64_t> &primes, const std::vector<std::string> &skip,
                    std::uint64_t seed, std::size_t samples, const std::string &data_dir,
                    const Output &out) {
  SuiteOptions o;
  if (!primes.empty())
    o.phi15_primes = o.cert_primes = o.fuzz_primes = primes;
  o.skip.insert(skip.begin(), skip.end());
  o.seed = seed;
  o.fuzz_samples = samples;
  o.data_dir = data_dir;
  o.log = [](const std::string &s) { std::cerr << s << '\n'; };
  const auto rows = run_paper_suite(o);
  json table = json::array();
  bool all = true;
  for (const auto &row : rows) {
    all &= row.pass;
    const std::string status = row.skipped ? "skipped" : row.pass ? "pass" : "fail";
    std::cerr << "[" << status << "] " << row.id << " " << row.name << ": " << row.detail << '\n';
    json j{{"id", row.id},
           {"name", row.name},
           {"categories", row.categories},
           {"status", status},
           {"detail", row.detail}};
    if (out.timing)
      j["seconds"] = row.seconds;
    table.push_back(j);
  }
  json r{{"method", "paper-suite"}, {"rows", table}, {"pass", all}, {"seed", seed}};
  return out.emit(r, all ? 0 : 1);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bogomolov multipliers of finite p-groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Output out;
  app.add_flag("--timing", out.timing, "include wall-clock seconds in the report");

  auto *cat = app.add_subcommand("catalog", "print a catalog presentation");
  std::string cat_family;
  Source cat_src;
  cat->add_option("family", cat_family, "phi15, phi28, phi29, heisenberg, freest_special, "
                                        "cyclic, elementary_abelian, direct_product")
      ->required();
  cat_src.add_params(cat);

  auto *info = app.add_subcommand("info", "structural summary of a group");
  Source info_src;
  info_src.add(info);

  auto *b0c = app.add_subcommand("b0", "compute or certify B0(G)");
  Source b0_src;
  b0_src.add(b0c);
  std::string method = "auto", cert_path, trace_path;
  b0c->add_option("--method", method, "auto, oracle, class2 or cert");
  b0c->add_option("--cert", cert_path, "certificate JSON");
  b0c->add_option("--trace", trace_path, "write the expansion trace (JSON lines)");

  auto *cp = app.add_subcommand("central-product", "B0 of a central product from its factors");
  std::string spec_path;
  bool asserted = false;
  std::uint64_t factor_cap = 1 << 16;
  cp->add_option("spec", spec_path, "central product spec JSON")->required();
  cp->add_flag("--assert-b0-trivial", asserted, "assume B0 = 0 for both factors");
  cp->add_option("--factor-cap", factor_cap, "enumeration cap per factor");

  auto *tr = app.add_subcommand("transgression", "(N cap G') / <N cap K(G)>");
  Source tr_src;
  tr_src.add(tr);
  std::vector<std::string> normal_words;
  tr->add_option("--normal", normal_words, "generators of the normal subgroup N")->required();

  auto *ver = app.add_subcommand("verify", "check a triviality certificate");
  Source ver_src;
  ver_src.add(ver);
  std::string ver_cert, ver_trace, ver_replay;
  ver->add_option("cert", ver_cert, "certificate JSON")->required();
  ver->add_option("--trace", ver_trace, "write the expansion trace (JSON lines)");
  ver->add_option("--replay", ver_replay, "check a stored trace instead of expanding");

  auto *suite = app.add_subcommand("paper-suite", "run the acceptance matrix");
  std::vector<std::int64_t> suite_primes;
  std::vector<std::string> suite_skip;
  std::uint64_t seed = SuiteOptions{}.seed;
  std::size_t samples = SuiteOptions{}.fuzz_samples;
  std::string data_dir = B0_DATA_DIR;
  suite->add_option("--p", suite_primes, "primes for the order-p^6 rows")->delimiter(',');
  suite->add_option("--skip", suite_skip, "row ids or categories to skip")->delimiter(',');
  suite->add_option("--seed", seed, "seed for the randomized rows");
  suite->add_option("--samples", samples, "random cases per group in the fuzz row");
  suite->add_option("--data-dir", data_dir, "directory holding certs/, specs/, groups/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*cat)
      return cmd_catalog(cat_family, cat_src);
    if (*info)
      return cmd_info(info_src, out);
    if (*b0c)
      return cmd_b0(b0_src, method, cert_path, trace_path, out);
    if (*cp)
      return cmd_central_product(spec_path, asserted, factor_cap, out);
    if (*tr)
      return cmd_transgression(tr_src, normal_words, out);
    if (*ver)
      return cmd_verify(ver_cert, ver_src, ver_trace, ver_replay, out);
    if (*suite)
      return cmd_paper_suite(suite_primes, suite_skip, seed, samples, data_dir, out);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 5;
  }
  return 2;
}

#include "b0/suite.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "b0/catalog.hpp"
#include "b0/central_product.hpp"
#include "b0/certificate.hpp"
#include "b0/cohomology.hpp"
#include "b0/error.hpp"
#include "b0/groupkit.hpp"
#include "b0/pc_subgroup.hpp"
#include "b0/wedge.hpp"

namespace b0 {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  return os.str();
}

std::shared_ptr<const PcGroup> cat(const std::string &ref) {
  return std::make_shared<const PcGroup>(catalog(CatalogParams::parse(ref)));
}

// Partitions of k, largest part first.
void partitions(int k, int max_part, std::vector<int> &cur, std::vector<std::vector<int>> &out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(k, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions(k - part, part, cur, out);
    cur.pop_back();
  }
}

// Every abelian p-group of order <= 64 as a product of cyclic groups, and
// the cyclic groups of prime order up to 61.
std::vector<std::string> abelian_refs() {
  std::vector<std::string> out;
  for (std::int64_t p : {2, 3, 5, 7}) {
    std::int64_t pk = 1;
    for (int k = 1;; ++k) {
      pk *= p;
      if (pk > 64)
        break;
      std::vector<std::vector<int>> parts;
      std::vector<int> cur;
      partitions(k, k, cur, parts);
      for (const auto &pt : parts) {
        std::string ref;
        for (std::size_t i = 0; i < pt.size(); ++i) {
          std::int64_t n = 1;
          for (int e = 0; e < pt[i]; ++e)
            n *= p;
          ref += (i ? " x " : "") + ("cyclic,n=" + std::to_string(n));
        }
        out.push_back(ref);
      }
    }
  }
  for (std::int64_t q = 11; q <= 61; ++q)
    if (is_prime(q))
      out.push_back("cyclic,n=" + std::to_string(q));
  return out;
}

const std::vector<std::string> kSmallNonabelian = {
    "heisenberg,r=2,d=1",
    "freest_special,d=2,p=2",
    "heisenberg,r=2,d=1 x cyclic,n=2",
    "freest_special,d=2,p=2 x cyclic,n=2",
};

const std::vector<std::string> kHeisenberg = {
    "heisenberg,r=2,d=1",
    "heisenberg,r=4,d=1",
    "heisenberg,r=4,d=2",
    "heisenberg,r=2,d=1:1",
};

const std::vector<std::string> kClass2 = {
    "heisenberg,r=2,d=1",
    "heisenberg,r=3,d=1",
    "heisenberg,r=4,d=1",
    "heisenberg,r=4,d=2",
    "heisenberg,r=2,d=1:1",
    "freest_special,d=2,p=2",
    "freest_special,d=2,p=3",
    "freest_special,d=3,p=2",
    "heisenberg,r=2,d=1 x cyclic,n=2",
    "heisenberg,r=2,d=1 x cyclic,n=4",
    "heisenberg,r=2,d=1 x cyclic,n=2 x cyclic,n=2",
    "heisenberg,r=2,d=1 x heisenberg,r=2,d=1",
    "heisenberg,r=3,d=1 x cyclic,n=2",
    "cyclic,n=4 x cyclic,n=4",
    "elementary_abelian,p=2,k=3",
};

const std::vector<std::pair<std::string, std::string>> kProducts = {
    {"heisenberg,r=2,d=1", "cyclic,n=2"},
    {"heisenberg,r=2,d=1", "cyclic,n=4"},
    {"heisenberg,r=2,d=1", "cyclic,n=2 x cyclic,n=2"},
    {"heisenberg,r=2,d=1", "heisenberg,r=2,d=1"},
    {"freest_special,d=2,p=2", "cyclic,n=8"},
    {"heisenberg,r=3,d=1", "cyclic,n=2"},
    {"cyclic,n=4", "cyclic,n=4"},
};

class Runner {
public:
  explicit Runner(const SuiteOptions &o) : o_(o) {}

  std::vector<SuiteRow> run() {
    std::vector<SuiteRow> rows;
    row(rows, 1, "oracle triviality floor", {"oracle"}, [&](SuiteRow &r) { floor(r); });
    row(rows, 2, "Heisenberg groups", {"class2", "oracle"}, [&](SuiteRow &r) { heisenberg(r); });
    row(rows, 3, "Phi15 class-2 engine", {"class2"}, [&](SuiteRow &r) { phi15(r); });
    row(rows, 4, "Phi28/Phi29 certificates", {"cert"}, [&](SuiteRow &r) { certs(r); });
    row(rows, 5, "Rai central product", {"central-product"}, [&](SuiteRow &r) { rai(r); });
    row(rows, 6, "class-2 engine vs oracle", {"class2", "oracle"},
        [&](SuiteRow &r) { duality(r); });
    row(rows, 7, "direct products", {"oracle"}, [&](SuiteRow &r) { products(r); });
    row(rows, 8, "power-commutator expansion fuzz", {"expansion"}, [&](SuiteRow &r) { fuzz(r); });
    row(rows, 9, "oracle robustness", {"oracle"}, [&](SuiteRow &r) { robustness(r); });
    row(rows, 10, "certificate trace audit", {"cert"}, [&](SuiteRow &r) { audit(r); });
    return rows;
  }

private:
  template <class F>
  void row(std::vector<SuiteRow> &rows, int id, std::string name, std::vector<std::string> cats,
           F body) {
    SuiteRow r;
    r.id = id;
    r.name = std::move(name);
    r.categories = std::move(cats);
    bool skip = o_.skip.count(std::to_string(id)) > 0;
    for (const auto &c : r.categories)
      skip |= o_.skip.count(c) > 0;
    if (skip) {
      r.skipped = true;
      r.pass = true;
      r.detail = "skipped";
      rows.push_back(std::move(r));
      return;
    }
    log("row " + std::to_string(id) + ": " + r.name);
    const auto t0 = Clock::now();
    r.pass = true;
    try {
      body(r);
    } catch (const std::exception &e) {
      r.pass = false;
      r.detail += (r.detail.empty() ? "" : "; ") + std::string("error: ") + e.what();
    }
    r.seconds = since(t0);
    rows.push_back(std::move(r));
  }

  void log(const std::string &s) const {
    if (o_.log)
      o_.log(s);
  }

  static void fail(SuiteRow &r, const std::string &msg) {
    r.pass = false;
    r.detail += (r.detail.empty() ? "" : "; ") + msg;
  }

  // Oracle result on a catalog reference, cached per (ref, mode, n).
  zl::AbelianInvariants oracle(const std::string &ref, SubgroupMode mode, std::uint64_t n = 0,
                               double *seconds = nullptr) {
    const auto key = std::make_tuple(ref, static_cast<int>(mode), n);
    if (const auto it = oracle_cache_.find(key); it != oracle_cache_.end()) {
      if (seconds)
        *seconds = oracle_time_[key];
      return it->second;
    }
    const auto t0 = Clock::now();
    const GroupTable t = enumerate(group(ref), kOracleHardCap);
    const auto res = b0_oracle(t, mode, n, kOracleHardCap).b0;
    oracle_time_[key] = since(t0);
    if (seconds)
      *seconds = oracle_time_[key];
    return oracle_cache_[key] = res;
  }

  std::shared_ptr<const PcGroup> group(const std::string &ref) {
    if (const auto it = groups_.find(ref); it != groups_.end())
      return it->second;
    std::shared_ptr<const PcGroup> g;
    if (ref.rfind("file:", 0) == 0)
      g = load_group_ref(ref.substr(5), o_.data_dir);
    else
      g = cat(ref);
    return groups_[ref] = g;
  }

  void floor(SuiteRow &r) {
    auto refs = abelian_refs();
    refs.insert(refs.end(), kSmallNonabelian.begin(), kSmallNonabelian.end());
    double worst = 0;
    for (const auto &ref : refs) {
      double s = 0;
      const auto b = oracle(ref, SubgroupMode::abelian, 0, &s);
      worst = std::max(worst, s);
      if (!b.is_trivial())
        fail(r, ref + " gives " + b.to_string());
      if (s >= 10)
        fail(r, ref + " took " + fmt_seconds(s));
    }
    r.detail += std::to_string(refs.size()) + " groups trivial, slowest " + fmt_seconds(worst);
    regression_.insert(refs.begin(), refs.end());
  }

  void heisenberg(SuiteRow &r) {
    for (const auto &ref : kHeisenberg) {
      const auto c2 = b0_class2(*group(ref)).invariants;
      double s = 0;
      const auto orc = oracle(ref, SubgroupMode::abelian, 0, &s);
      if (!c2.is_trivial() || !orc.is_trivial())
        fail(r, ref + ": class2 " + c2.to_string() + ", oracle " + orc.to_string());
      if (s >= 300)
        fail(r, ref + " oracle took " + fmt_seconds(s));
      regression_.insert(ref);
    }
    r.detail = std::to_string(kHeisenberg.size()) + " groups, class2 = oracle = 0";
  }

  void phi15(SuiteRow &r) {
    for (const auto p : o_.phi15_primes) {
      const auto t0 = Clock::now();
      const auto res = b0_class2(*group("phi15,p=" + std::to_string(p)));
      const double s = since(t0);
      r.detail += (r.detail.empty() ? "" : ", ") + ("p=" + std::to_string(p) + ": " +
                                                    res.invariants.to_string() + " in " +
                                                    fmt_seconds(s));
      if (!res.invariants.is_trivial())
        fail(r, "phi15 p=" + std::to_string(p) + " nontrivial");
      if (s >= 60)
        fail(r, "phi15 p=" + std::to_string(p) + " exceeded 60 s");
    }
  }

  void certs(SuiteRow &r) {
    for (const std::string fam : {"phi28", "phi29"}) {
      const Certificate cert =
          Certificate::parse_json(read_file(o_.data_dir + "/certs/" + fam + ".json"));
      for (const auto p : o_.cert_primes) {
        const auto t0 = Clock::now();
        CatalogParams params = CatalogParams::parse(fam + ",p=" + std::to_string(p));
        auto g = std::make_shared<const PcGroup>(catalog(params));
        CertificateRun run = verify_certificate(*g, cert, certificate_symbols(&params));
        const double s = since(t0);
        const std::string tag = fam + " p=" + std::to_string(p);
        r.detail += (r.detail.empty() ? "" : ", ") + tag + " " + verdict_name(run.verdict) +
                    " in " + fmt_seconds(s);
        if (run.verdict != Verdict::certified_trivial)
          fail(r, tag + ": " + run.reason);
        if (s >= 10)
          fail(r, tag + " exceeded 10 s");
        cert_runs_.push_back({tag, std::move(g), std::move(run)});
      }
    }
  }

  void rai(SuiteRow &r) {
    const auto spec = CentralProductSpec::parse_json(
        read_file(o_.data_dir + "/specs/rai_p2.json"), o_.data_dir);
    const CentralProduct cp(spec, 1 << 12);
    const auto res = central_product_b0(cp, spec, false, verify_b0_trivial);
    const auto tr = transgression_image(cp.left(), cp.h1());
    r.detail = "B0(G) = " + res.invariants.to_string() + " (|G| = " + std::to_string(cp.order()) +
               "), transgression image " + tr.to_string() + ", factors verified by " +
               res.left_precondition;
    const auto z2 = zl::AbelianInvariants::from_cyclic_orders(std::vector<std::uint64_t>{2});
    if (res.invariants != z2)
      fail(r, "expected Z/2 for B0(G)");
    if (tr != z2)
      fail(r, "expected Z/2 for the transgression image");
  }

  void duality(SuiteRow &r) {
    for (const auto &ref : kClass2) {
      const auto c2 = b0_class2(*group(ref)).invariants;
      const auto orc = oracle(ref, SubgroupMode::abelian);
      if (c2 != orc)
        fail(r, ref + ": class2 " + c2.to_string() + " vs oracle " + orc.to_string());
      regression_.insert(ref);
    }
    r.detail += std::to_string(kClass2.size()) + " groups agree";
  }

  void products(SuiteRow &r) {
    for (const auto &[a, b] : kProducts) {
      const std::string prod = a + " x " + b;
      const auto ga = oracle(a, SubgroupMode::abelian), gb = oracle(b, SubgroupMode::abelian);
      const auto gp = oracle(prod, SubgroupMode::abelian);
      const auto merged = zl::direct_sum(ga, gb);
      if (gp != merged)
        fail(r, prod + ": " + gp.to_string() + " vs " + merged.to_string());
      regression_.insert({a, b, prod});
    }
    r.detail += std::to_string(kProducts.size()) + " pairs agree";
  }

  void fuzz(SuiteRow &r) {
    std::vector<std::string> refs = {"heisenberg,r=2,d=1", "heisenberg,r=4,d=1",
                                     "heisenberg,r=4,d=2", "heisenberg,r=3,d=1:3",
                                     "freest_special,d=4,p=2", "freest_special,d=4,p=3",
                                     "file:groups/order64_class3_b0.pc"};
    for (const auto p : o_.fuzz_primes)
      for (const std::string fam : {"phi15", "phi28", "phi29"})
        refs.push_back(fam + ",p=" + std::to_string(p));
    std::mt19937_64 rng(o_.seed);
    std::size_t failures = 0, cases = 0;
    for (const auto &ref : refs) {
      const auto g = group(ref);
      if (nilpotency_class_pc(*g) > 5)
        continue;
      std::int64_t p = 2;
      while (g->order() % p != 0)
        ++p;
      std::uniform_int_distribution<std::uint64_t> pick(0, g->order() - 1);
      std::uniform_int_distribution<std::int64_t> pick_n(0, 2 * p * p);
      for (std::size_t k = 0; k < o_.fuzz_samples; ++k) {
        const Element x = g->element_at(pick(rng)), y = g->element_at(pick(rng));
        const std::int64_t n = pick_n(rng);
        ++cases;
        if (power_comm_expand(*g, x, y, n) != g->commutator(g->power(x, n), y)) {
          if (failures++ == 0)
            fail(r, ref + ": x=" + g->format(x) + " y=" + g->format(y) + " n=" +
                        std::to_string(n));
        }
      }
    }
    r.detail += std::to_string(refs.size()) + " groups, " + std::to_string(cases) + " cases, " +
                std::to_string(failures) + " failures (seed " + std::to_string(o_.seed) + ")";
    if (failures)
      r.pass = false;
  }

  void robustness(SuiteRow &r) {
    auto set = regression_;
    if (set.empty()) {
      for (const auto &x : abelian_refs())
        set.insert(x);
      set.insert(kSmallNonabelian.begin(), kSmallNonabelian.end());
      set.insert(kHeisenberg.begin(), kHeisenberg.end());
      set.insert(kClass2.begin(), kClass2.end());
    }
    set.insert("file:groups/order64_class3_b0.pc");
    std::size_t nontrivial = 0;
    for (const auto &ref : set) {
      const std::uint64_t order = group(ref)->order();
      const auto base = oracle(ref, SubgroupMode::abelian);
      const auto dbl = oracle(ref, SubgroupMode::abelian, 2 * order);
      const auto bic = oracle(ref, SubgroupMode::bicyclic);
      if (base != dbl)
        fail(r, ref + ": n=|G| " + base.to_string() + " vs n=2|G| " + dbl.to_string());
      if (base != bic)
        fail(r, ref + ": abelian " + base.to_string() + " vs bicyclic " + bic.to_string());
      nontrivial += !base.is_trivial();
    }
    r.detail += std::to_string(set.size()) + " groups (" + std::to_string(nontrivial) +
                " with B0 != 0) agree across moduli and subgroup families";
  }

  void audit(SuiteRow &r) {
    if (cert_runs_.empty()) {
      SuiteRow tmp;
      certs(tmp);
    }
    std::size_t steps = 0;
    for (auto &c : cert_runs_) {
      const PcGroup &g = *c.group;
      if (c.run.verdict != Verdict::certified_trivial)
        continue;
      for (const auto &w : c.run.witnesses)
        if (!g.is_identity(g.commutator(g.collect(w.u), g.collect(w.v))))
          fail(r, c.tag + ": witness (" + w.u_text + ", " + w.v_text + ") does not commute");
      std::stringstream trace;
      write_trace(trace, c.run);
      const TraceAudit a = check_trace(g, trace);
      steps += a.nodes_checked + a.roots_checked;
      for (const auto &f : a.failures)
        fail(r, c.tag + ": " + f);
      if (!a.trivial)
        fail(r, c.tag + ": replayed lattice order " + std::to_string(a.lattice_order) +
                    " differs from |G'| = " + std::to_string(a.derived_order));
    }
    r.detail += std::to_string(cert_runs_.size()) + " runs, " + std::to_string(steps) +
                " steps replayed, 0 unverified";
    if (!r.pass)
      r.detail += " (see failures)";
  }

  struct CertRun {
    std::string tag;
    std::shared_ptr<const PcGroup> group;
    CertificateRun run;
  };

  const SuiteOptions &o_;
  std::map<std::string, std::shared_ptr<const PcGroup>> groups_;
  std::map<std::tuple<std::string, int, std::uint64_t>, zl::AbelianInvariants> oracle_cache_;
  std::map<std::tuple<std::string, int, std::uint64_t>, double> oracle_time_;
  std::set<std::string> regression_;
  std::vector<CertRun> cert_runs_;
};

} // namespace

std::vector<SuiteRow> run_paper_suite(const SuiteOptions &opts) { return Runner(opts).run(); }

std::optional<std::string> verify_b0_trivial(const PcGroup &g) {
  const std::uint64_t order = g.order();
  zl::AbelianInvariants b;
  std::string method;
  if (order <= oracle_cap()) {
    auto shared = std::make_shared<const PcGroup>(g);
    b = b0_oracle(enumerate(shared, order), SubgroupMode::abelian).b0;
    method = "oracle";
  } else if (nilpotency_class_pc(g) <= 2) {
    b = b0_class2(g).invariants;
    method = "class2";
  } else {
    return std::nullopt;
  }
  if (!b.is_trivial())
    throw UsageError("B0(" + g.presentation().name + ") = " + b.to_string() +
                     " is nonzero; the central product formula does not apply");
  return method;
}

} // namespace b0

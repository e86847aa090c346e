#include "b0/central_product.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "json.hpp"

#include "b0/catalog.hpp"
#include "b0/dsl.hpp"
#include "b0/error.hpp"

namespace b0 {

namespace {

using json = nlohmann::json;

Element parse_element(const PcGroup &g, const json &v, const std::string &what) {
  if (!v.is_string())
    throw UsageError(what + ": expected a word string");
  try {
    return g.collect(v.get<std::string>());
  } catch (const ParseError &e) {
    throw UsageError(what + ": " + e.what());
  }
}

std::vector<Element> parse_elements(const PcGroup &g, const json &v, const std::string &what) {
  if (!v.is_array())
    throw UsageError(what + ": expected an array of words");
  std::vector<Element> out;
  for (const auto &x : v)
    out.push_back(parse_element(g, x, what));
  return out;
}

void require_central(const GroupTable &g, const Subgroup &s, const std::string &what) {
  for (Id x : s.gens)
    for (Id y : g.generators())
      if (g.mul(x, y) != g.mul(y, x))
        throw UsageError(what + " is not central (" + g.label(x) + " does not commute with " +
                         g.label(y) + ")");
}

// Evaluates a pc normal form of H under generator images in N.
Element apply_images(const PcGroup &n, const std::vector<Element> &images, const Word &w) {
  Element out = n.identity();
  for (const auto &l : w)
    out = n.multiply(out, n.power(images[l.gen], l.exp));
  return out;
}

} // namespace

CentralProductSpec CentralProductSpec::parse_json(const std::string &text,
                                                  const std::string &base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw UsageError(std::string("central product spec: ") + e.what());
  }
  if (!j.is_object())
    throw UsageError("central product spec: expected an object");
  for (const char *key : {"left", "right", "H1_gens", "N1_gens", "xi"})
    if (!j.contains(key))
      throw UsageError(std::string("central product spec: missing key '") + key + "'");
  CentralProductSpec s;
  s.left_ref = j["left"].get<std::string>();
  s.right_ref = j["right"].get<std::string>();
  s.left = load_group_ref(s.left_ref, base_dir);
  s.right = load_group_ref(s.right_ref, base_dir);
  s.h1_gens = parse_elements(*s.left, j["H1_gens"], "H1_gens");
  s.n1_gens = parse_elements(*s.right, j["N1_gens"], "N1_gens");
  if (!j["xi"].is_array())
    throw UsageError("xi: expected an array of [h, n] pairs");
  for (const auto &pair : j["xi"]) {
    if (!pair.is_array() || pair.size() != 2)
      throw UsageError("xi: expected an array of [h, n] pairs");
    s.xi.emplace_back(parse_element(*s.left, pair[0], "xi"),
                      parse_element(*s.right, pair[1], "xi"));
  }
  if (j.contains("eta") && !j["eta"].is_null()) {
    auto eta = parse_elements(*s.right, j["eta"], "eta");
    if (eta.size() != s.left->rank())
      throw UsageError("eta: expected one image per pc generator of the left factor");
    s.eta = std::move(eta);
  }
  if (j.contains("k_membership")) {
    const auto mode = j["k_membership"].get<std::string>();
    if (mode == "alternating_form")
      s.alternating_form_k = true;
    else if (mode != "scan")
      throw UsageError("k_membership must be 'scan' or 'alternating_form'");
  }
  return s;
}

CentralProduct::CentralProduct(const CentralProductSpec &spec, std::uint64_t factor_cap)
    : h_(std::make_shared<GroupTable>(enumerate(spec.left, factor_cap))),
      n_(std::make_shared<GroupTable>(enumerate(spec.right, factor_cap))) {
  std::vector<Id> hg, ng;
  for (const auto &e : spec.h1_gens)
    hg.push_back(h_->id_of(e));
  for (const auto &e : spec.n1_gens)
    ng.push_back(n_->id_of(e));
  h1_ = subgroup_closure(*h_, hg);
  n1_ = subgroup_closure(*n_, ng);
  require_central(*h_, h1_, "H1");
  require_central(*n_, n1_, "N1");
  if (h1_.order() != n1_.order())
    throw UsageError("|H1| = " + std::to_string(h1_.order()) + " differs from |N1| = " +
                     std::to_string(n1_.order()));

  std::vector<std::pair<Id, Id>> dom;
  std::vector<Id> dom_ids;
  for (const auto &[a, b] : spec.xi) {
    const Id x = h_->id_of(a), y = n_->id_of(b);
    if (!h1_.contains(x))
      throw UsageError("xi: " + h_->label(x) + " is not in H1");
    if (!n1_.contains(y))
      throw UsageError("xi: " + n_->label(y) + " is not in N1");
    dom.emplace_back(x, y);
    dom_ids.push_back(x);
  }
  if (subgroup_closure(*h_, dom_ids).order() != h1_.order())
    throw UsageError("xi: the listed elements do not generate H1");

  // Extend along the Cayley graph of H1; any conflict means xi is not a
  // homomorphism.
  xi_[0] = 0;
  std::deque<Id> queue{0};
  while (!queue.empty()) {
    const Id x = queue.front();
    queue.pop_front();
    for (const auto &[d, img] : dom) {
      const Id y = h_->mul(x, d);
      const Id v = n_->mul(xi_[x], img);
      const auto it = xi_.find(y);
      if (it == xi_.end()) {
        xi_[y] = v;
        queue.push_back(y);
      } else if (it->second != v) {
        throw UsageError("xi does not extend to a homomorphism H1 -> N1 (conflict at " +
                         h_->label(y) + ")");
      }
    }
  }
  std::set<Id> image;
  for (const auto &[a, b] : xi_)
    image.insert(b);
  if (image.size() != n1_.order())
    throw UsageError("xi is not injective");
  for (const auto &[a, b] : xi_)
    z_.emplace_back(a, n_->inv(b));
}

IdPair CentralProduct::canonical(IdPair x) const {
  IdPair best = x;
  for (const auto &[a, b] : z_) {
    const IdPair c{h_->mul(x.first, a), n_->mul(x.second, b)};
    if (c < best)
      best = c;
  }
  return best;
}

IdPair CentralProduct::mul(IdPair x, IdPair y) const {
  return canonical({h_->mul(x.first, y.first), n_->mul(x.second, y.second)});
}

GroupTable CentralProduct::materialize(std::uint64_t cap) const {
  const std::uint64_t ord = order();
  if (ord > cap)
    throw CapExceeded("materializing the central product", ord, cap);
  std::vector<IdPair> reps;
  reps.reserve(ord);
  for (Id h = 0; h < h_->order(); ++h)
    for (Id n = 0; n < n_->order(); ++n) {
      const IdPair c = canonical({h, n});
      if (c.first == h && c.second == n)
        reps.push_back(c);
    }
  if (reps.size() != ord)
    throw InternalError("central product: coset count mismatch");
  const auto index = [&](IdPair p) {
    return static_cast<Id>(std::lower_bound(reps.begin(), reps.end(), p) - reps.begin());
  };
  std::vector<std::vector<Id>> table(ord, std::vector<Id>(ord));
  for (std::size_t i = 0; i < ord; ++i)
    for (std::size_t j = 0; j < ord; ++j)
      table[i][j] = index(mul(reps[i], reps[j]));
  return GroupTable::from_cayley(std::move(table));
}

namespace {

// d with rank = d + d(d-1)/2, after checking the presentation is the
// catalog freest special group.
std::size_t freest_special_rank(const PcGroup &g) {
  const std::int64_t p = g.relative_order(0);
  for (std::size_t d = 2; d <= 8; ++d) {
    if (d + d * (d - 1) / 2 != g.rank())
      continue;
    CatalogParams c;
    c.family = "freest_special";
    c.rank = static_cast<std::int64_t>(d);
    c.p = p;
    const auto ref = catalog(c);
    const auto &pres = g.presentation();
    if (ref.names == pres.names && ref.relative_orders == pres.relative_orders &&
        ref.power_rhs == pres.power_rhs && ref.comm_rhs == pres.comm_rhs)
      return d;
  }
  throw UsageError("alternating_form K-membership requires a catalog freest special factor (" +
                   g.presentation().name + ")");
}

struct KOracle {
  kernels::Bitmap bits;
  const GroupTable *g = nullptr;
  std::size_t d = 0;

  KOracle(const GroupTable &t, bool alternating) : g(&t) {
    if (alternating)
      d = freest_special_rank(*t.pc());
    else
      bits = commutator_set(t);
  }
  // x must lie in G' when using the alternating form.
  bool operator()(Id x) const {
    if (d == 0)
      return bits[x] != 0;
    return freest_special_is_commutator(*g->pc(), d, g->element(x));
  }
};

std::string precondition(const PcGroup &g, bool asserted, const B0TrivialityCheck &check) {
  if (asserted)
    return "asserted";
  const auto r = check ? check(g) : std::nullopt;
  if (!r)
    throw UsageError("cannot verify B0 = 0 for the factor " + g.presentation().name +
                     "; pass --assert-b0-trivial to assume it");
  return *r;
}

} // namespace

CentralProductB0 central_product_b0(const CentralProduct &cp, const CentralProductSpec &spec,
                                    bool precondition_asserted, const B0TrivialityCheck &check) {
  CentralProductB0 out;
  const auto &h = cp.left();
  const auto &n = cp.right();
  out.left_precondition = precondition(*h.pc(), precondition_asserted, check);
  out.right_precondition = precondition(*n.pc(), precondition_asserted, check);

  const Subgroup hd = derived_subgroup(h), nd = derived_subgroup(n);
  const KOracle kh(h, spec.alternating_form_k), kn(n, spec.alternating_form_k);

  Subgroup a;
  std::vector<Id> bgens;
  out.hypothesis_i = true;
  for (const auto &[x, y] : cp.z()) {
    const bool in_hd = hd.contains(x), in_nd = nd.contains(y);
    if (in_hd) {
      const Id v = cp.xi().at(x); // K(N) lies in N'
      if (!nd.contains(v) || !kn(v))
        out.hypothesis_i = false;
    }
    if (!in_hd || !in_nd)
      continue;
    a.members.push_back(x);
    if (kh(x) && kn(y))
      bgens.push_back(x);
  }
  a.gens = a.members;
  const Subgroup b = subgroup_closure(h, bgens);
  out.z_order = cp.z().size();
  out.z_derived_order = a.order();
  out.z_k_order = b.order();
  out.invariants = quotient_invariants(h, a, b);

  if (spec.eta) {
    const auto &hp = *h.pc();
    const auto &np = *n.pc();
    const auto &img = *spec.eta;
    bool ok = true;
    const auto &pres = hp.presentation();
    for (std::size_t i = 0; i < hp.rank() && ok; ++i) {
      const Element lhs = np.power(img[i], pres.relative_orders[i]);
      ok = lhs == apply_images(np, img, pres.power_rhs[i]);
      for (std::size_t j = i + 1; j < hp.rank() && ok; ++j) {
        const Word *w = pres.comm(j, i);
        const Element rhs = w ? apply_images(np, img, *w) : np.identity();
        ok = np.commutator(img[j], img[i]) == rhs;
      }
    }
    for (const auto &[x, y] : cp.xi()) {
      if (!ok)
        break;
      ok = n.id_of(apply_images(np, img, hp.to_word(h.element(x)))) == y;
    }
    out.hypothesis_ii = ok;
  }
  return out;
}

} // namespace b0

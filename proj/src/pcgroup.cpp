#include "b0/pcgroup.hpp"

#include <set>
#include <sstream>

#include "b0/dsl.hpp"
#include "b0/error.hpp"

namespace b0 {

std::optional<std::size_t> PcPresentation::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      return i;
  return std::nullopt;
}

const Word *PcPresentation::comm(std::size_t j, std::size_t i) const {
  auto it = comm_rhs.find({j, i});
  return it == comm_rhs.end() ? nullptr : &it->second;
}

void PcPresentation::validate_structure() const {
  const std::size_t n = rank();
  if (relative_orders.size() != n || power_rhs.size() != n)
    throw UsageError("presentation arrays do not match the generator count");
  std::set<std::string> seen;
  for (const auto &nm : names)
    if (!seen.insert(nm).second)
      throw UsageError("duplicate generator " + nm);
  for (std::size_t i = 0; i < n; ++i)
    if (relative_orders[i] < 2)
      throw UsageError("relative order of " + names[i] + " must be at least 2");
  auto check_word = [&](const Word &w, std::size_t after, const std::string &where) {
    for (const auto &l : w) {
      if (l.gen >= n)
        throw UsageError(where + ": generator index out of range");
      if (l.gen <= after)
        throw UsageError("ordering violation in " + where + ": " + names[l.gen] +
                         " is not later than " + names[after]);
    }
  };
  for (std::size_t i = 0; i < n; ++i)
    check_word(power_rhs[i], i, "pow " + names[i]);
  for (const auto &[key, w] : comm_rhs) {
    const auto [j, i] = key;
    if (j >= n || i >= n)
      throw UsageError("commutator relation: generator index out of range");
    if (j <= i)
      throw UsageError("ordering violation: commutator keys must be [later, earlier], got [" +
                       names[j] + ", " + names[i] + "]");
    check_word(w, i, "comm [" + names[j] + ", " + names[i] + "]");
  }
}

PcGroup::PcGroup(PcPresentation pres) : PcGroup(std::move(pres), true) {}

PcGroup PcGroup::unchecked(PcPresentation pres) { return PcGroup(std::move(pres), false); }

PcGroup::PcGroup(PcPresentation pres, bool check) : pres_(std::move(pres)) {
  pres_.validate_structure();
  (void)order();
  build_tables();
  if (check) {
    const auto report = consistency();
    if (!report.consistent()) {
      std::string msg = "inconsistent presentation " + pres_.name + ":";
      for (std::size_t k = 0; k < report.failures.size() && k < 5; ++k)
        msg += " " + report.failures[k] + ";";
      throw UsageError(msg);
    }
  }
}

std::uint64_t PcGroup::order() const {
  unsigned __int128 o = 1;
  for (auto m : pres_.relative_orders) {
    o *= static_cast<std::uint64_t>(m);
    if (o > (static_cast<unsigned __int128>(1) << 62))
      throw UsageError("group order exceeds 2^62");
  }
  return static_cast<std::uint64_t>(o);
}

void PcGroup::build_tables() {
  const std::size_t n = rank();
  pow_nf_.assign(n, identity());
  inv_gen_.assign(n, identity());
  conj_nf_.assign(n, std::vector<Element>(n));
  // Bottom-up: every table entry for index k only needs entries above k.
  for (std::size_t kk = n; kk-- > 0;) {
    pow_nf_[kk] = collect(pres_.power_rhs[kk]);
    for (std::size_t j = kk + 1; j < n; ++j) {
      Element e = generator(j);
      if (const Word *w = pres_.comm(j, kk))
        mul_elem(e, collect(*w));
      conj_nf_[j][kk] = std::move(e);
    }
    Element e = identity();
    e[kk] = pres_.relative_orders[kk] - 1;
    mul_elem(e, inverse(pow_nf_[kk]));
    inv_gen_[kk] = std::move(e);
  }
  // Powers of the conjugation action, when the table stays small. Entries
  // for k only multiply inside <g_{k+1}, ...>, so they are filled bottom-up.
  constexpr std::uint64_t kConjTableLimit = 200'000;
  std::uint64_t entries = 0;
  for (std::size_t k = 0; k < n; ++k)
    entries += static_cast<std::uint64_t>(pres_.relative_orders[k]) * (n - k);
  if (entries > kConjTableLimit)
    return;
  conj_pow_.assign(n, {});
  for (std::size_t k = n; k-- > 0;) {
    const auto m = static_cast<std::size_t>(pres_.relative_orders[k]);
    auto &tab = conj_pow_[k];
    tab.assign(m, std::vector<Element>(n, identity()));
    for (std::size_t j = k + 1; j < n; ++j)
      tab[0][j] = generator(j);
    for (std::size_t c = 1; c < m; ++c)
      for (std::size_t j = k + 1; j < n; ++j) {
        Element out = identity();
        for (std::size_t i = k + 1; i < n; ++i)
          if (tab[c - 1][j][i] != 0)
            mul_elem(out, power(conj_nf_[i][k], tab[c - 1][j][i]));
        tab[c][j] = std::move(out);
      }
  }
}

Element PcGroup::generator(std::size_t i) const {
  if (i >= rank())
    throw UsageError("generator index out of range");
  Element e = identity();
  e[i] = 1;
  return e;
}

bool PcGroup::is_identity(const Element &a) const {
  for (auto x : a)
    if (x != 0)
      return false;
  return true;
}

void PcGroup::check_element(const Element &a) const {
  if (a.size() != rank())
    throw UsageError("malformed element: wrong length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0 || a[i] >= pres_.relative_orders[i])
      throw UsageError("malformed element: exponent out of range");
}

void PcGroup::mul_gen(Element &e, std::size_t k, std::int64_t c) const {
  const std::size_t n = rank();
  std::size_t last = n;
  for (std::size_t j = n; j-- > k + 1;)
    if (e[j] != 0) {
      last = j;
      break;
    }
  if (last == n) {
    const std::int64_t m = pres_.relative_orders[k];
    const std::int64_t s = e[k] + c;
    e[k] = s % m;
    for (std::int64_t q = s / m; q > 0; --q)
      mul_elem(e, pow_nf_[k]);
    return;
  }
  // e = prefix * tail; tail * g_k^c = g_k^c * tail^{g_k^c}.
  Element tail = identity();
  for (std::size_t j = k + 1; j < n; ++j) {
    tail[j] = e[j];
    e[j] = 0;
  }
  tail = conjugate_tail(tail, k, c);
  mul_gen(e, k, c);
  mul_elem(e, tail);
}

Element PcGroup::conjugate_tail(const Element &tail, std::size_t k, std::int64_t c) const {
  const std::size_t n = rank();
  const std::int64_t m = pres_.relative_orders[k];
  if (!conj_pow_.empty() && !conj_pow_[k].empty() && c < m) {
    Element out = identity();
    for (std::size_t j = k + 1; j < n; ++j)
      if (tail[j] != 0)
        mul_elem(out, power(conj_pow_[k][static_cast<std::size_t>(c)][j], tail[j]));
    return out;
  }
  Element cur = tail;
  for (std::int64_t step = 0; step < c; ++step) {
    Element out = identity();
    for (std::size_t j = k + 1; j < n; ++j)
      if (cur[j] != 0)
        mul_elem(out, power(conj_nf_[j][k], cur[j]));
    cur = std::move(out);
  }
  return cur;
}

void PcGroup::mul_elem(Element &e, const Element &f) const {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0)
      mul_gen(e, i, f[i]);
}

Element PcGroup::multiply(const Element &a, const Element &b) const {
  Element e = a;
  mul_elem(e, b);
  return e;
}

Element PcGroup::inverse(const Element &a) const {
  Element res = identity();
  for (std::size_t i = rank(); i-- > 0;)
    if (a[i] != 0)
      mul_elem(res, power(inv_gen_[i], a[i]));
  return res;
}

Element PcGroup::power(const Element &a, std::int64_t k) const {
  Element base = k < 0 ? inverse(a) : a;
  // Negating INT64_MIN is avoided by working with the unsigned magnitude.
  std::uint64_t m = k < 0 ? 0 - static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
  Element res = identity();
  while (m != 0) {
    if (m & 1)
      mul_elem(res, base);
    m >>= 1;
    if (m != 0)
      base = multiply(base, base);
  }
  return res;
}

Element PcGroup::commutator(const Element &a, const Element &b) const {
  return multiply(inverse(multiply(b, a)), multiply(a, b));
}

Element PcGroup::conjugate(const Element &a, const Element &b) const {
  return multiply(inverse(b), multiply(a, b));
}

Element PcGroup::collect(const Word &w) const {
  Element res = identity();
  for (const auto &l : w) {
    if (l.gen >= rank())
      throw UsageError("unknown generator index in word");
    if (l.exp == 0)
      continue;
    if (l.exp == -1)
      mul_elem(res, inv_gen_[l.gen]);
    else
      mul_elem(res, power(generator(l.gen), l.exp));
  }
  return res;
}

Element PcGroup::collect(std::string_view word_text) const {
  return collect(parse_word(word_text, pres_.names));
}

Word PcGroup::to_word(const Element &a) const {
  Word w;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      w.push_back({i, a[i]});
  return w;
}

std::string PcGroup::format(const Element &a) const {
  return format_word(to_word(a), pres_.names);
}

std::uint64_t PcGroup::index(const Element &a) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    idx = idx * static_cast<std::uint64_t>(pres_.relative_orders[i]) +
          static_cast<std::uint64_t>(a[i]);
  return idx;
}

Element PcGroup::element_at(std::uint64_t idx) const {
  Element e = identity();
  for (std::size_t i = rank(); i-- > 0;) {
    const auto m = static_cast<std::uint64_t>(pres_.relative_orders[i]);
    e[i] = static_cast<std::int64_t>(idx % m);
    idx /= m;
  }
  return e;
}

ConsistencyReport PcGroup::consistency() const {
  ConsistencyReport report;
  const std::size_t n = rank();
  const auto &nm = pres_.names;
  auto g = [&](std::size_t i) { return generator(i); };
  auto m = [&](std::size_t i) { return std::to_string(pres_.relative_orders[i]); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (multiply(multiply(g(k), g(j)), g(i)) != multiply(g(k), multiply(g(j), g(i))))
          report.failures.push_back("overlap (" + nm[k] + "*" + nm[j] + ")*" + nm[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto lhs = multiply(pow_nf_[j], g(i));
      const auto rhs = multiply(power(g(j), pres_.relative_orders[j] - 1), multiply(g(j), g(i)));
      if (lhs != rhs)
        report.failures.push_back("overlap (" + nm[j] + "^" + m(j) + ")*" + nm[i]);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto lhs = multiply(g(j), pow_nf_[i]);
      const auto rhs = multiply(multiply(g(j), g(i)), power(g(i), pres_.relative_orders[i] - 1));
      if (lhs != rhs)
        report.failures.push_back("overlap " + nm[j] + "*(" + nm[i] + "^" + m(i) + ")");
    }
  for (std::size_t i = 0; i < n; ++i)
    if (multiply(g(i), pow_nf_[i]) != multiply(pow_nf_[i], g(i)))
      report.failures.push_back("overlap " + nm[i] + "^" +
                                std::to_string(pres_.relative_orders[i] + 1));
  return report;
}

ConsistencyReport consistency_check(const PcPresentation &pres) {
  return PcGroup::unchecked(pres).consistency();
}

} // namespace b0

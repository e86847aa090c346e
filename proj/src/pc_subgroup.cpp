#include "b0/pc_subgroup.hpp"

#include <numeric>

#include "b0/error.hpp"

namespace b0 {

std::size_t leading_index(const Element &x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0)
      return i;
  return x.size();
}

PcSubgroup::PcSubgroup(const PcGroup &g) : g_(&g), slots_(g.rank()) {}

PcSubgroup PcSubgroup::generated(const PcGroup &g, const std::vector<Element> &gens) {
  PcSubgroup h(g);
  for (const auto &x : gens) {
    g.check_element(x);
    h.insert(x);
  }
  h.close(false);
  return h;
}

PcSubgroup PcSubgroup::normal_closure(const PcGroup &g, const std::vector<Element> &gens) {
  PcSubgroup h(g);
  for (const auto &x : gens) {
    g.check_element(x);
    h.insert(x);
  }
  h.close(true);
  return h;
}

PcSubgroup PcSubgroup::whole(const PcGroup &g) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < g.rank(); ++i)
    gens.push_back(g.generator(i));
  return generated(g, gens);
}

void PcSubgroup::insert(Element x) {
  const PcGroup &g = *g_;
  std::vector<Element> work{std::move(x)};
  while (!work.empty()) {
    Element u = std::move(work.back());
    work.pop_back();
    for (;;) {
      const std::size_t i = leading_index(u);
      if (i == u.size())
        break;
      const std::int64_t m = g.relative_order(i);
      auto &slot = slots_[i];
      if (!slot) {
        // Make the leading exponent gcd(a, m) and queue what is left over.
        const std::int64_t a = u[i], d = std::gcd(a, m);
        std::int64_t k = 1;
        while ((k * a) % m != d)
          ++k;
        Element y = g.power(u, k);
        work.push_back(g.multiply(u, g.power(y, -(a / d))));
        work.push_back(g.power(y, m / d));
        slot = std::move(y);
        break;
      }
      const std::int64_t b = (*slot)[i];
      if (u[i] % b == 0) {
        u = g.multiply(u, g.power(*slot, -(u[i] / b)));
        continue;
      }
      // Euclid on leading exponents.
      Element v = *slot;
      while (v[i] != 0) {
        const std::int64_t q = u[i] / v[i];
        u = g.multiply(u, g.power(v, -q));
        std::swap(u, v);
      }
      const std::int64_t d = u[i];
      work.push_back(std::move(v));
      work.push_back(g.power(u, m / d));
      slot = std::move(u);
      break;
    }
  }
}

void PcSubgroup::close(bool normal) {
  const PcGroup &g = *g_;
  bool changed = true;
  while (changed) {
    changed = false;
    const auto before = leading_exponents();
    const auto b = basis();
    for (std::size_t s = 0; s < b.size(); ++s) {
      for (std::size_t t = 0; t < s; ++t) {
        auto c = g.commutator(b[s], b[t]);
        if (!contains(c))
          insert(std::move(c));
      }
      if (normal)
        for (std::size_t k = 0; k < g.rank(); ++k) {
          auto c = g.conjugate(b[s], g.generator(k));
          if (!contains(c))
            insert(std::move(c));
        }
    }
    changed = leading_exponents() != before;
    // A slot may have been replaced without changing its exponent.
    if (!changed && basis() != b)
      changed = true;
  }
}

bool PcSubgroup::contains(Element x) const {
  const PcGroup &g = *g_;
  for (;;) {
    const std::size_t i = leading_index(x);
    if (i == x.size())
      return true;
    const auto &slot = slots_[i];
    if (!slot || x[i] % (*slot)[i] != 0)
      return false;
    x = g.multiply(x, g.power(*slot, -(x[i] / (*slot)[i])));
  }
}

std::uint64_t PcSubgroup::order() const {
  std::uint64_t o = 1;
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i])
      o *= static_cast<std::uint64_t>(g_->relative_order(i) / (*slots_[i])[i]);
  return o;
}

std::vector<Element> PcSubgroup::basis() const {
  std::vector<Element> out;
  for (const auto &s : slots_)
    if (s)
      out.push_back(*s);
  return out;
}

std::vector<std::int64_t> PcSubgroup::leading_exponents() const {
  std::vector<std::int64_t> out(slots_.size(), 0);
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i])
      out[i] = (*slots_[i])[i];
  return out;
}

bool PcSubgroup::is_abelian() const {
  const auto b = basis();
  for (std::size_t s = 0; s < b.size(); ++s)
    for (std::size_t t = 0; t < s; ++t)
      if (!g_->is_identity(g_->commutator(b[s], b[t])))
        return false;
  return true;
}

bool PcSubgroup::is_normal() const {
  for (const auto &x : basis())
    for (std::size_t k = 0; k < g_->rank(); ++k)
      if (!contains(g_->conjugate(x, g_->generator(k))))
        return false;
  return true;
}

std::vector<Element> PcSubgroup::elements(std::uint64_t cap) const {
  const std::uint64_t n = order();
  if (n > cap)
    throw CapExceeded("subgroup enumeration", n, cap);
  std::vector<Element> out{g_->identity()};
  // Right-to-left so that each element is u_1^{c_1} ... u_k^{c_k}.
  const auto b = basis();
  for (std::size_t s = b.size(); s-- > 0;) {
    const std::size_t i = leading_index(b[s]);
    const std::int64_t reps = g_->relative_order(i) / b[s][i];
    std::vector<Element> next;
    next.reserve(out.size() * static_cast<std::size_t>(reps));
    Element pw = g_->identity();
    for (std::int64_t c = 0; c < reps; ++c) {
      for (const auto &x : out)
        next.push_back(g_->multiply(pw, x));
      pw = g_->multiply(pw, b[s]);
    }
    out = std::move(next);
  }
  return out;
}

bool PcSubgroup::operator==(const PcSubgroup &o) const {
  if (g_ != o.g_ || order() != o.order())
    return false;
  for (const auto &x : o.basis())
    if (!contains(x))
      return false;
  return true;
}

PcSubgroup derived_subgroup_pc(const PcGroup &g) {
  std::vector<Element> comms;
  for (std::size_t j = 0; j < g.rank(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      comms.push_back(g.commutator(g.generator(j), g.generator(i)));
  return PcSubgroup::normal_closure(g, comms);
}

std::vector<PcSubgroup> lower_central_series(const PcGroup &g) {
  std::vector<PcSubgroup> series{PcSubgroup::whole(g)};
  while (!series.back().is_trivial()) {
    std::vector<Element> comms;
    for (const auto &h : series.back().basis())
      for (std::size_t k = 0; k < g.rank(); ++k)
        comms.push_back(g.commutator(h, g.generator(k)));
    auto next = PcSubgroup::normal_closure(g, comms);
    if (next.order() == series.back().order())
      throw UsageError("group is not nilpotent");
    series.push_back(std::move(next));
  }
  return series;
}

int nilpotency_class_pc(const PcGroup &g) {
  const auto series = lower_central_series(g);
  return series.size() <= 1 ? 0 : static_cast<int>(series.size() - 1);
}

} // namespace b0

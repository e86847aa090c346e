#include "b0/catalog.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "b0/dsl.hpp"

#include "b0/error.hpp"

namespace b0 {

namespace {

constexpr std::int64_t kMaxPrime = 10000;

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

struct Builder {
  PcPresentation p;

  std::size_t gen(const std::string &name, std::int64_t order) {
    p.names.push_back(name);
    p.relative_orders.push_back(order);
    p.power_rhs.emplace_back();
    return p.names.size() - 1;
  }
  void pow(std::size_t g, Word w) { p.power_rhs[g] = std::move(w); }
  void comm(std::size_t j, std::size_t i, Word w) {
    if (!w.empty())
      p.comm_rhs[{j, i}] = std::move(w);
  }
};

// Single letter g^e with e reduced mod m (g of exponent m); empty when trivial.
Word letter(std::size_t g, std::int64_t e, std::int64_t m) {
  const std::int64_t r = mod(e, m);
  return r == 0 ? Word{} : Word{{g, r}};
}

Word concat(Word a, const Word &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require_phi_prime(const std::string &family, std::int64_t p) {
  if (p <= 3)
    throw UsageError(family + " requires p>3 (got p=" + std::to_string(p) + ")");
  if (p > kMaxPrime)
    throw UsageError("p exceeds the supported bound 10000");
  if (!is_prime(p))
    throw UsageError("p=" + std::to_string(p) + " is not prime");
}

PcPresentation phi15(std::int64_t p) {
  require_phi_prime("phi15", p);
  const std::int64_t g = smallest_primitive_root(p);
  Builder b;
  b.p.name = "phi15_p" + std::to_string(p);
  const auto a1 = b.gen("a1", p), a2 = b.gen("a2", p), a3 = b.gen("a3", p), a4 = b.gen("a4", p);
  const auto b1 = b.gen("b1", p), b2 = b.gen("b2", p);
  // [a1,a2] = [a3,a4] = b1, [a1,a3] = b2, [a2,a4] = b2^g, stored as [later, earlier].
  b.comm(a2, a1, letter(b1, -1, p));
  b.comm(a4, a3, letter(b1, -1, p));
  b.comm(a3, a1, letter(b2, -1, p));
  b.comm(a4, a2, letter(b2, -g, p));
  return b.p;
}

PcPresentation phi28_29(std::int64_t p, bool is29) {
  require_phi_prime(is29 ? "phi29" : "phi28", p);
  const std::int64_t nu = is29 ? smallest_nonresidue(p) : 1;
  Builder b;
  b.p.name = std::string(is29 ? "phi29" : "phi28") + "_p" + std::to_string(p);
  const auto a = b.gen("a", p * p);
  const auto a1 = b.gen("a1", p), a2 = b.gen("a2", p), a3 = b.gen("a3", p), a4 = b.gen("a4", p);
  b.comm(a1, a, {{a2, 1}});
  b.comm(a2, a, {{a3, 1}});
  b.comm(a3, a, {{a4, 1}});
  b.comm(a2, a1, letter(a4, -1, p)); // [a1,a2] = a4
  // a3^nu = a1^p a2^{p(p-1)/2} and a4^nu = a2^p, solved for a1^p and a2^p.
  b.pow(a2, letter(a4, nu, p));
  b.pow(a1, concat(letter(a3, nu, p), letter(a4, -nu * ((p - 1) / 2), p)));
  return b.p;
}

PcPresentation heisenberg(std::int64_t r, const std::vector<std::int64_t> &d) {
  if (r < 2)
    throw UsageError("heisenberg requires r >= 2");
  if (d.empty())
    throw UsageError("heisenberg requires at least one d_i");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 1)
      throw UsageError("heisenberg requires d_i >= 1");
    const std::int64_t next = i + 1 < d.size() ? d[i + 1] : r;
    if (next % d[i] != 0)
      throw UsageError("divisibility chain d_1|...|d_n|r violated at d_" + std::to_string(i + 1));
  }
  Builder b;
  b.p.name = "heisenberg_r" + std::to_string(r);
  for (auto x : d)
    b.p.name += "_" + std::to_string(x);
  std::vector<std::size_t> xs, ys;
  for (std::size_t i = 0; i < d.size(); ++i) {
    xs.push_back(b.gen("x" + std::to_string(i + 1), r));
    ys.push_back(b.gen("y" + std::to_string(i + 1), r));
  }
  const auto z = b.gen("z", r);
  for (std::size_t i = 0; i < d.size(); ++i)
    b.comm(ys[i], xs[i], letter(z, -d[i], r)); // [x_i, y_i] = z^{d_i}
  return b.p;
}

PcPresentation freest_special(std::int64_t d, std::int64_t p) {
  if (d < 2)
    throw UsageError("freest_special requires d >= 2");
  if (!is_prime(p) || p > kMaxPrime)
    throw UsageError("freest_special requires a prime p <= 10000");
  if (d > 8)
    throw UsageError("freest_special supports d <= 8");
  Builder b;
  b.p.name = "freest_special_d" + std::to_string(d) + "_p" + std::to_string(p);
  std::vector<std::size_t> as;
  for (std::int64_t i = 1; i <= d; ++i)
    as.push_back(b.gen("a" + std::to_string(i), p));
  std::vector<std::vector<std::size_t>> c(d, std::vector<std::size_t>(d));
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = i + 1; j < d; ++j)
      c[i][j] = b.gen("c" + std::to_string(i + 1) + "_" + std::to_string(j + 1), p);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = i + 1; j < d; ++j)
      b.comm(as[j], as[i], letter(c[i][j], -1, p)); // [a_i, a_j] = c_ij
  return b.p;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos)
      return out;
    start = pos + 1;
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos)
    return "";
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_int(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size())
      throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw UsageError("parameter " + key + ": expected an integer, got '" + v + "'");
  }
}

} // namespace

bool is_prime(std::int64_t n) {
  if (n < 2)
    return false;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0)
      return false;
  return true;
}

std::int64_t smallest_primitive_root(std::int64_t p) {
  if (!is_prime(p))
    throw UsageError("primitive root requires a prime");
  if (p == 2)
    return 1;
  for (std::int64_t g = 2; g < p; ++g) {
    std::int64_t x = 1, ord = 0;
    do {
      x = x * g % p;
      ++ord;
    } while (x != 1);
    if (ord == p - 1)
      return g;
  }
  throw InternalError("no primitive root found");
}

std::int64_t smallest_nonresidue(std::int64_t p) {
  if (!is_prime(p) || p == 2)
    throw UsageError("quadratic non-residue requires an odd prime");
  std::set<std::int64_t> squares;
  for (std::int64_t x = 1; x < p; ++x)
    squares.insert(x * x % p);
  for (std::int64_t v = 2; v < p; ++v)
    if (!squares.count(v))
      return v;
  throw InternalError("no non-residue found");
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  for (std::int64_t s = 1; s < p; ++s)
    if (mod(a * s, p) == 1)
      return s;
  throw UsageError("no inverse of " + std::to_string(a) + " mod " + std::to_string(p));
}

PcPresentation direct_product(const PcPresentation &left, const PcPresentation &right) {
  std::set<std::string> lnames(left.names.begin(), left.names.end());
  bool clash = false;
  for (const auto &n : right.names)
    clash |= lnames.count(n) > 0;
  PcPresentation out;
  out.name = left.name + "_x_" + right.name;
  const std::size_t off = left.rank();
  for (const auto &n : left.names)
    out.names.push_back(clash ? n + "_1" : n);
  for (const auto &n : right.names)
    out.names.push_back(clash ? n + "_2" : n);
  out.relative_orders = left.relative_orders;
  out.relative_orders.insert(out.relative_orders.end(), right.relative_orders.begin(),
                             right.relative_orders.end());
  out.power_rhs = left.power_rhs;
  for (const auto &w : right.power_rhs) {
    Word s = w;
    for (auto &l : s)
      l.gen += off;
    out.power_rhs.push_back(std::move(s));
  }
  out.comm_rhs = left.comm_rhs;
  for (const auto &[key, w] : right.comm_rhs) {
    Word s = w;
    for (auto &l : s)
      l.gen += off;
    out.comm_rhs[{key.first + off, key.second + off}] = std::move(s);
  }
  return out;
}

PcPresentation catalog(const CatalogParams &c) {
  const std::string &f = c.family;
  if (f == "phi15")
    return phi15(c.p);
  if (f == "phi28")
    return phi28_29(c.p, false);
  if (f == "phi29")
    return phi28_29(c.p, true);
  if (f == "heisenberg")
    return heisenberg(c.r, c.d);
  if (f == "freest_special")
    return freest_special(c.rank, c.p);
  if (f == "cyclic") {
    if (c.n < 2)
      throw UsageError("cyclic requires n >= 2");
    Builder b;
    b.p.name = "cyclic_" + std::to_string(c.n);
    b.gen("g", c.n);
    return b.p;
  }
  if (f == "elementary_abelian") {
    if (!is_prime(c.p) || c.rank < 1)
      throw UsageError("elementary_abelian requires a prime p and k >= 1");
    Builder b;
    b.p.name = "elementary_abelian_p" + std::to_string(c.p) + "_k" + std::to_string(c.rank);
    for (std::int64_t i = 1; i <= c.rank; ++i)
      b.gen("e" + std::to_string(i), c.p);
    return b.p;
  }
  if (f == "direct_product") {
    if (c.factors.size() < 2)
      throw UsageError("direct_product requires at least two factors");
    PcPresentation acc = catalog(c.factors[0]);
    for (std::size_t i = 1; i < c.factors.size(); ++i)
      acc = direct_product(acc, catalog(c.factors[i]));
    return acc;
  }
  throw UsageError("unknown catalog family '" + f + "'");
}

CatalogParams CatalogParams::parse(std::string_view ref) {
  // Products are written "A x B x C".
  std::vector<std::string> parts;
  {
    std::string s(ref);
    std::size_t start = 0;
    for (;;) {
      const auto pos = s.find(" x ", start);
      parts.push_back(trim(s.substr(start, pos == std::string::npos ? pos : pos - start)));
      if (pos == std::string::npos)
        break;
      start = pos + 3;
    }
  }
  if (parts.size() > 1) {
    CatalogParams out;
    out.family = "direct_product";
    for (const auto &part : parts)
      out.factors.push_back(parse(part));
    return out;
  }
  const auto fields = split(parts[0], ',');
  CatalogParams out;
  out.family = trim(fields[0]);
  if (out.family.empty())
    throw UsageError("empty catalog reference");
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const auto kv = split(fields[i], '=');
    if (kv.size() != 2)
      throw UsageError("catalog parameter '" + fields[i] + "' is not key=value");
    const std::string key = trim(kv[0]), val = trim(kv[1]);
    if (key == "p")
      out.p = parse_int(key, val);
    else if (key == "r")
      out.r = parse_int(key, val);
    else if (key == "n")
      out.n = parse_int(key, val);
    else if (key == "d" && out.family == "freest_special")
      out.rank = parse_int(key, val);
    else if (key == "k" || key == "rank")
      out.rank = parse_int(key, val);
    else if (key == "d")
      for (const auto &x : split(val, ':'))
        out.d.push_back(parse_int(key, trim(x)));
    else
      throw UsageError("unknown catalog parameter '" + key + "'");
  }
  return out;
}

std::string CatalogParams::to_string() const {
  if (family == "direct_product") {
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i)
      s += (i ? " x " : "") + factors[i].to_string();
    return s;
  }
  std::ostringstream os;
  os << family;
  if (family == "phi15" || family == "phi28" || family == "phi29")
    os << ",p=" << p;
  else if (family == "heisenberg") {
    os << ",r=" << r << ",d=";
    for (std::size_t i = 0; i < d.size(); ++i)
      os << (i ? ":" : "") << d[i];
  } else if (family == "freest_special")
    os << ",d=" << rank << ",p=" << p;
  else if (family == "elementary_abelian")
    os << ",p=" << p << ",k=" << rank;
  else if (family == "cyclic")
    os << ",n=" << n;
  return os.str();
}

std::vector<std::string> verify_defining_relations(const PcGroup &g, const CatalogParams &c) {
  std::vector<std::string> failures;
  auto E = [&](const std::string &w) { return g.collect(w); };
  auto C = [&](const std::string &x, const std::string &y) { return g.commutator(E(x), E(y)); };
  auto expect = [&](const Element &lhs, const Element &rhs, const std::string &what) {
    if (lhs != rhs)
      failures.push_back(what);
  };
  // Every generator pair not listed must commute.
  auto others_commute = [&](const std::set<std::pair<std::string, std::string>> &listed) {
    const auto &nm = g.presentation().names;
    for (std::size_t i = 0; i < nm.size(); ++i)
      for (std::size_t j = i + 1; j < nm.size(); ++j)
        if (!listed.count({nm[i], nm[j]}) && !listed.count({nm[j], nm[i]}))
          expect(C(nm[i], nm[j]), g.identity(), "[" + nm[i] + "," + nm[j] + "]=1");
  };
  const std::string ps = std::to_string(c.p);
  if (c.family == "phi15") {
    const std::string gs = std::to_string(smallest_primitive_root(c.p));
    expect(C("a1", "a2"), E("b1"), "[a1,a2]=b1");
    expect(C("a3", "a4"), E("b1"), "[a3,a4]=b1");
    expect(C("a1", "a3"), E("b2"), "[a1,a3]=b2");
    expect(C("a2", "a4"), E("b2^" + gs), "[a2,a4]=b2^g");
    for (const char *x : {"a1", "a2", "a3", "a4", "b1", "b2"})
      expect(E(std::string(x) + "^" + ps), g.identity(), std::string(x) + "^p=1");
    others_commute({{"a1", "a2"}, {"a3", "a4"}, {"a1", "a3"}, {"a2", "a4"}});
  } else if (c.family == "phi28" || c.family == "phi29") {
    const std::int64_t nu = c.family == "phi29" ? smallest_nonresidue(c.p) : 1;
    const std::string nus = std::to_string(nu);
    const std::string half = std::to_string(c.p * (c.p - 1) / 2);
    expect(C("a1", "a"), E("a2"), "[a1,a]=a2");
    expect(C("a2", "a"), E("a3"), "[a2,a]=a3");
    expect(C("a3", "a"), E("a4"), "[a3,a]=a4");
    expect(C("a1", "a2"), E("a4"), "[a1,a2]=a4");
    expect(E("a3^" + nus), E("a1^" + ps + "*a2^" + half), "a3^nu=a1^p*a2^(p(p-1)/2)");
    expect(E("a4^" + nus), E("a2^" + ps), "a4^nu=a2^p");
    expect(E("a^" + std::to_string(c.p * c.p)), g.identity(), "a^(p^2)=1");
    expect(E("a3^" + ps), g.identity(), "a3^p=1");
    expect(E("a4^" + ps), g.identity(), "a4^p=1");
    others_commute({{"a1", "a"}, {"a2", "a"}, {"a3", "a"}, {"a1", "a2"}});
  } else if (c.family == "heisenberg") {
    std::set<std::pair<std::string, std::string>> listed;
    const std::string rs = std::to_string(c.r);
    for (std::size_t i = 0; i < c.d.size(); ++i) {
      const std::string x = "x" + std::to_string(i + 1), y = "y" + std::to_string(i + 1);
      expect(C(x, y), E("z^" + std::to_string(c.d[i])), "[" + x + "," + y + "]=z^d");
      expect(E(x + "^" + rs), g.identity(), x + "^r=1");
      expect(E(y + "^" + rs), g.identity(), y + "^r=1");
      listed.insert({x, y});
    }
    expect(E("z^" + rs), g.identity(), "z^r=1");
    others_commute(listed);
  } else if (c.family == "freest_special") {
    std::set<std::pair<std::string, std::string>> listed;
    for (std::int64_t i = 1; i <= c.rank; ++i) {
      const std::string ai = "a" + std::to_string(i);
      expect(E(ai + "^" + ps), g.identity(), ai + "^p=1");
      for (std::int64_t j = i + 1; j <= c.rank; ++j) {
        const std::string aj = "a" + std::to_string(j);
        const std::string cij = "c" + std::to_string(i) + "_" + std::to_string(j);
        expect(C(ai, aj), E(cij), "[" + ai + "," + aj + "]=" + cij);
        listed.insert({ai, aj});
      }
    }
    others_commute(listed);
  }
  return failures;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::shared_ptr<const PcGroup> load_group_ref(const std::string &ref, const std::string &base_dir,
                                              CatalogParams *params) {
  const std::string prefix = "catalog:";
  if (ref.rfind(prefix, 0) == 0) {
    const auto c = CatalogParams::parse(ref.substr(prefix.size()));
    if (params)
      *params = c;
    return std::make_shared<const PcGroup>(catalog(c));
  }
  std::filesystem::path path(ref);
  if (path.is_relative() && !base_dir.empty())
    path = std::filesystem::path(base_dir) / path;
  if (params)
    *params = CatalogParams{};
  return std::make_shared<const PcGroup>(parse_pc(read_file(path.string())));
}

} // namespace b0

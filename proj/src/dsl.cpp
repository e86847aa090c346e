#include "b0/dsl.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

#include "b0/error.hpp"

namespace b0 {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t t = 0; t < k; ++t, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const std::size_t l = line, cl = col, start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      advance(j - i);
      out.push_back({Tok::Ident, std::string(src.substr(start, j - start)), l, cl});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      advance(j - i);
      out.push_back({Tok::Int, std::string(src.substr(start, j - start)), l, cl});
    } else if (std::string_view("{};,=^[]*-").find(c) != std::string_view::npos) {
      advance(1);
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
public:
  Parser(std::vector<Token> toks, const ExponentSymbols &symbols)
      : toks_(std::move(toks)), symbols_(symbols) {}

  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string &msg, const Token &t) const {
    throw ParseError(msg, t.line, t.col);
  }
  [[noreturn]] void fail_here(const std::string &msg) const { fail(msg, peek()); }

  bool is_sym(const char *s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool is_ident(const char *s) const { return peek().kind == Tok::Ident && peek().text == s; }

  void expect_sym(const char *s) {
    if (!is_sym(s))
      fail_here(std::string("expected '") + s + "'" + found());
    next();
  }
  const Token &expect_ident() {
    if (peek().kind != Tok::Ident)
      fail_here("expected identifier" + found());
    return next();
  }
  std::int64_t expect_int() {
    if (peek().kind != Tok::Int)
      fail_here("expected integer" + found());
    return to_int(next());
  }
  std::string found() const {
    return peek().kind == Tok::End ? ", found end of input" : ", found '" + peek().text + "'";
  }

  std::int64_t to_int(const Token &t) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail("integer out of range", t);
    return v;
  }

  std::int64_t signed_exponent() {
    bool neg = false;
    if (is_sym("-")) {
      next();
      neg = true;
    }
    std::int64_t v;
    if (peek().kind == Tok::Int) {
      v = to_int(next());
    } else if (peek().kind == Tok::Ident) {
      const Token &t = next();
      auto it = symbols_.find(t.text);
      if (it == symbols_.end())
        fail("unknown exponent symbol " + t.text, t);
      v = it->second;
    } else {
      fail_here("expected exponent" + found());
    }
    return neg ? -v : v;
  }

  // `after` = index that every letter must exceed (ordering constraint).
  Word word(const std::vector<std::string> &names, std::optional<std::size_t> after,
            const std::string &where) {
    Word w;
    if (peek().kind == Tok::Int && peek().text == "1") {
      next();
      return w;
    }
    for (;;) {
      const Token &t = expect_ident();
      std::size_t idx = names.size();
      for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == t.text)
          idx = k;
      if (idx == names.size())
        fail("unknown generator " + t.text, t);
      if (after && idx <= *after)
        fail("ordering violation in " + where + ": " + t.text + " is not later than " +
                 names[*after],
             t);
      std::int64_t e = 1;
      if (is_sym("^")) {
        next();
        e = signed_exponent();
      }
      w.push_back({idx, e});
      if (!is_sym("*"))
        break;
      next();
    }
    return w;
  }

  std::size_t gen_index(const PcPresentation &p, const Token &t) const {
    auto idx = p.index_of(t.text);
    if (!idx)
      fail("unknown generator " + t.text, t);
    return *idx;
  }

  PcPresentation presentation() {
    PcPresentation p;
    if (!is_ident("group"))
      fail_here("expected 'group'" + found());
    next();
    p.name = expect_ident().text;
    expect_sym("{");
    std::vector<std::optional<std::int64_t>> orders;
    std::vector<std::optional<Word>> pows;
    while (!is_sym("}")) {
      const Token &kw = expect_ident();
      if (kw.text == "gens") {
        for (;;) {
          const Token &t = expect_ident();
          if (p.index_of(t.text))
            fail("duplicate generator " + t.text, t);
          p.names.push_back(t.text);
          orders.emplace_back();
          pows.emplace_back();
          if (!is_sym(","))
            break;
          next();
        }
      } else if (kw.text == "order") {
        const std::size_t g = gen_index(p, expect_ident());
        expect_sym("=");
        const Token &vt = peek();
        const std::int64_t m = expect_int();
        if (m < 2)
          fail("relative order of " + p.names[g] + " must be at least 2", vt);
        if (orders[g] && *orders[g] != m)
          fail("conflicting order for " + p.names[g], vt);
        orders[g] = m;
      } else if (kw.text == "pow") {
        const std::size_t g = gen_index(p, expect_ident());
        expect_sym("^");
        const Token &vt = peek();
        const std::int64_t m = expect_int();
        if (m < 2)
          fail("relative order of " + p.names[g] + " must be at least 2", vt);
        if (orders[g] && *orders[g] != m)
          fail("pow exponent does not match the order of " + p.names[g], vt);
        orders[g] = m;
        expect_sym("=");
        if (pows[g])
          fail("duplicate pow relation for " + p.names[g], kw);
        pows[g] = word(p.names, g, "pow " + p.names[g]);
      } else if (kw.text == "comm") {
        expect_sym("[");
        const Token &jt = expect_ident();
        const std::size_t j = gen_index(p, jt);
        expect_sym(",");
        const std::size_t i = gen_index(p, expect_ident());
        expect_sym("]");
        if (j <= i)
          fail("ordering violation: commutator keys must be [later, earlier]", jt);
        expect_sym("=");
        if (p.comm_rhs.count({j, i}))
          fail("duplicate comm relation", kw);
        p.comm_rhs[{j, i}] =
            word(p.names, i, "comm [" + p.names[j] + ", " + p.names[i] + "]");
      } else {
        fail("unknown statement '" + kw.text + "'", kw);
      }
      expect_sym(";");
    }
    const Token &close = next();
    if (peek().kind != Tok::End)
      fail_here("trailing input after group definition");
    for (std::size_t g = 0; g < p.names.size(); ++g) {
      if (!orders[g])
        fail("no order given for generator " + p.names[g], close);
      p.relative_orders.push_back(*orders[g]);
      p.power_rhs.push_back(pows[g] ? *pows[g] : Word{});
    }
    // Trivial commutator relations are omitted.
    for (auto it = p.comm_rhs.begin(); it != p.comm_rhs.end();)
      it = it->second.empty() ? p.comm_rhs.erase(it) : std::next(it);
    p.validate_structure();
    return p;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ExponentSymbols &symbols_;
};

} // namespace

PcPresentation parse_pc(std::string_view text) {
  const ExponentSymbols none;
  Parser parser(tokenize(text), none);
  return parser.presentation();
}

Word parse_word(std::string_view text, const std::vector<std::string> &names,
                const ExponentSymbols &symbols) {
  Parser parser(tokenize(text), symbols);
  Word w = parser.word(names, std::nullopt, "word");
  if (parser.peek().kind != Tok::End)
    parser.fail_here("trailing input in word");
  return w;
}

std::string format_word(const Word &w, const std::vector<std::string> &names) {
  if (w.empty())
    return "1";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k)
      out += "*";
    out += names.at(w[k].gen);
    if (w[k].exp != 1)
      out += "^" + std::to_string(w[k].exp);
  }
  return out;
}

std::string emit_pc(const PcPresentation &pres) {
  std::ostringstream os;
  os << "group " << pres.name << " {\n  gens ";
  for (std::size_t i = 0; i < pres.names.size(); ++i)
    os << (i ? ", " : "") << pres.names[i];
  os << ";\n";
  for (std::size_t i = 0; i < pres.names.size(); ++i)
    os << "  order " << pres.names[i] << " = " << pres.relative_orders[i] << ";\n";
  for (std::size_t i = 0; i < pres.names.size(); ++i)
    if (!pres.power_rhs[i].empty())
      os << "  pow " << pres.names[i] << "^" << pres.relative_orders[i] << " = "
         << format_word(pres.power_rhs[i], pres.names) << ";\n";
  for (const auto &[key, w] : pres.comm_rhs)
    if (!w.empty())
      os << "  comm [" << pres.names[key.first] << ", " << pres.names[key.second]
         << "] = " << format_word(w, pres.names) << ";\n";
  os << "}\n";
  return os.str();
}

} // namespace b0

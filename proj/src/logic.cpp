#include "negtax/logic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "negtax/error.hpp"

namespace negtax::logic {

// ---------------------------------------------------------------- Formula

Formula Formula::make(NodeKind kind, std::string name, std::string type_tag, Quantifier q,
                      std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->type_tag = std::move(type_tag);
  n->quantifier = q;
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::var(std::string name) {
  return make(NodeKind::Var, std::move(name), {}, Quantifier::Forall, {});
}
Formula Formula::pred(std::string name, std::vector<Formula> args) {
  return make(NodeKind::Pred, std::move(name), {}, Quantifier::Forall, std::move(args));
}
Formula Formula::negation(Formula body) {
  return make(NodeKind::Not, {}, {}, Quantifier::Forall, {std::move(body)});
}
Formula Formula::quant(Quantifier q, std::string var, Formula body, std::string type_tag) {
  return make(NodeKind::Quant, std::move(var), std::move(type_tag), q, {std::move(body)});
}
Formula Formula::conj(Formula lhs, Formula rhs) {
  return make(NodeKind::And, {}, {}, Quantifier::Forall, {std::move(lhs), std::move(rhs)});
}
Formula Formula::disj(Formula lhs, Formula rhs) {
  return make(NodeKind::Or, {}, {}, Quantifier::Forall, {std::move(lhs), std::move(rhs)});
}
Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(NodeKind::Implies, {}, {}, Quantifier::Forall, {std::move(lhs), std::move(rhs)});
}
Formula Formula::lambda(std::string var, std::string type_tag, Formula body) {
  return make(NodeKind::Lambda, std::move(var), std::move(type_tag), Quantifier::Forall,
              {std::move(body)});
}
Formula Formula::app(Formula fn, Formula arg) {
  return make(NodeKind::App, {}, {}, Quantifier::Forall, {std::move(fn), std::move(arg)});
}

NodeKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const std::string& Formula::type_tag() const { return node_->type_tag; }
Quantifier Formula::quantifier() const { return node_->quantifier; }
std::span<const Formula> Formula::children() const { return node_->children; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.kind != y.kind || x.name != y.name || x.type_tag != y.type_tag ||
      x.children.size() != y.children.size()) {
    return false;
  }
  if (x.kind == NodeKind::Quant && x.quantifier != y.quantifier) return false;
  return std::equal(x.children.begin(), x.children.end(), y.children.begin());
}

// ------------------------------------------------------------------ lexer

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  Colon,
  LAngle,
  RAngle,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Eq,
  Neq,
  Forall,
  Exists,
  Lambda,
  End,
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

struct Symbol {
  std::string_view spelling;
  Tok kind;
};

// Longest spellings first where prefixes overlap.
constexpr std::array<Symbol, 23> kSymbols = {{
    {"\xE2\x88\x80", Tok::Forall},   // ∀
    {"\xE2\x88\x83", Tok::Exists},   // ∃
    {"\xC2\xAC", Tok::Not},          // ¬
    {"\xE2\x88\xA7", Tok::And},      // ∧
    {"\xE2\x88\xA8", Tok::Or},       // ∨
    {"\xE2\x86\x92", Tok::Implies},  // →
    {"\xE2\x87\x92", Tok::Implies},  // ⇒
    {"\xE2\x86\x94", Tok::Iff},      // ↔
    {"\xE2\x87\x94", Tok::Iff},      // ⇔
    {"\xE2\x89\xA0", Tok::Neq},      // ≠
    {"\xCE\xBB", Tok::Lambda},       // λ
    {"<->", Tok::Iff},
    {"->", Tok::Implies},
    {"=>", Tok::Implies},
    {"&&", Tok::And},
    {"||", Tok::Or},
    {"!=", Tok::Neq},
    {"&", Tok::And},
    {"|", Tok::Or},
    {"~", Tok::Not},
    {"!", Tok::Not},
    {"\\", Tok::Lambda},
    {"=", Tok::Eq},
}};

bool ident_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'' || c >= 0x80;
}

bool starts_symbol(std::string_view rest) {
  for (const auto& s : kSymbols) {
    if (static_cast<unsigned char>(s.spelling[0]) >= 0x80 && rest.starts_with(s.spelling)) {
      return true;
    }
  }
  return false;
}

std::size_t utf8_len(std::string_view src, std::size_t i) {
  const auto lead = static_cast<unsigned char>(src[i]);
  std::size_t n = 0;
  if ((lead >> 5) == 0x6) n = 2;
  else if ((lead >> 4) == 0xE) n = 3;
  else if ((lead >> 3) == 0x1E) n = 4;
  if (n == 0 || i + n > src.size()) throw ParseError(i, "valid UTF-8");
  for (std::size_t k = 1; k < n; ++k) {
    if ((static_cast<unsigned char>(src[i + k]) >> 6) != 0x2) throw ParseError(i, "valid UTF-8");
  }
  return n;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    std::string_view rest = src.substr(i);
    bool matched = false;
    for (const auto& s : kSymbols) {
      if (rest.starts_with(s.spelling)) {
        out.push_back({s.kind, i, std::string(s.spelling)});
        i += s.spelling.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    switch (c) {
      case '(': out.push_back({Tok::LParen, i, "("}); ++i; continue;
      case ')': out.push_back({Tok::RParen, i, ")"}); ++i; continue;
      case ',': out.push_back({Tok::Comma, i, ","}); ++i; continue;
      case '.': out.push_back({Tok::Dot, i, "."}); ++i; continue;
      case ':': out.push_back({Tok::Colon, i, ":"}); ++i; continue;
      case '<': out.push_back({Tok::LAngle, i, "<"}); ++i; continue;
      case '>': out.push_back({Tok::RAngle, i, ">"}); ++i; continue;
      default: break;
    }
    if (!ident_byte(c)) throw ParseError(i, "a formula token");
    std::size_t start = i;
    while (i < src.size()) {
      unsigned char d = static_cast<unsigned char>(src[i]);
      if (!ident_byte(d)) break;
      if (d >= 0x80) {
        if (starts_symbol(src.substr(i))) break;
        i += utf8_len(src, i);
      } else {
        ++i;
      }
    }
    std::string word(src.substr(start, i - start));
    Tok kind = Tok::Ident;
    if (word == "forall") kind = Tok::Forall;
    else if (word == "exists") kind = Tok::Exists;
    else if (word == "not") kind = Tok::Not;
    else if (word == "lam" || word == "lambda") kind = Tok::Lambda;
    out.push_back({kind, start, std::move(word)});
  }
  out.push_back({Tok::End, src.size(), ""});
  return out;
}

// ----------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts) : toks_(std::move(toks)), opts_(opts) {}

  Formula parse_all() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > p_.opts_.max_depth) throw ParseError(p_.peek().offset, "shallower nesting");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  // Left-nested chains grow the tree without recursing in the parser, so
  // each link takes from the same depth budget as recursion does.
  struct ChainGuard {
    explicit ChainGuard(Parser& p) : p_(p) {}
    ~ChainGuard() { p_.depth_ -= links_; }
    void link() {
      ++links_;
      if (++p_.depth_ > p_.opts_.max_depth) {
        throw ParseError(p_.peek().offset, "a shorter operator chain");
      }
    }
    Parser& p_;
    std::size_t links_ = 0;
  };

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(peek().offset, what);
    return next();
  }

  // formula := implication ; binders are handled in unary() and extend
  // as far right as possible.
  Formula formula() {
    DepthGuard g(*this);
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) return Formula::implies(lhs, formula());
    if (accept(Tok::Iff)) {
      Formula rhs = formula();
      return Formula::conj(Formula::implies(lhs, rhs), Formula::implies(rhs, lhs));
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    ChainGuard chain(*this);
    while (accept(Tok::Or)) {
      chain.link();
      lhs = Formula::disj(lhs, conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    ChainGuard chain(*this);
    while (accept(Tok::And)) {
      chain.link();
      lhs = Formula::conj(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    DepthGuard g(*this);
    if (accept(Tok::Not)) return Formula::negation(unary());
    if (at(Tok::Forall) || at(Tok::Exists)) {
      Quantifier q = next().kind == Tok::Forall ? Quantifier::Forall : Quantifier::Exists;
      std::string var = expect(Tok::Ident, "a bound variable").text;
      std::string type;
      if (accept(Tok::Colon)) type = type_expr();
      if (!accept(Tok::Dot)) accept(Tok::Comma);
      bound_.push_back(var);
      Formula body = formula();
      bound_.pop_back();
      return Formula::quant(q, std::move(var), std::move(body), std::move(type));
    }
    if (accept(Tok::Lambda)) {
      std::vector<std::pair<std::string, std::string>> binders;
      do {
        std::string var = expect(Tok::Ident, "a lambda variable").text;
        std::string type;
        if (accept(Tok::Colon)) type = type_expr();
        binders.emplace_back(std::move(var), std::move(type));
        if (depth_ + binders.size() > opts_.max_depth) {
          throw ParseError(peek().offset, "fewer lambda binders");
        }
      } while (at(Tok::Ident));
      expect(Tok::Dot, "'.' after lambda binders");
      for (const auto& b : binders) bound_.push_back(b.first);
      Formula body = formula();
      bound_.resize(bound_.size() - binders.size());
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = Formula::lambda(it->first, it->second, std::move(body));
      }
      return body;
    }
    return comparison();
  }

  Formula comparison() {
    Formula lhs = postfix();
    if (accept(Tok::Eq)) return Formula::pred("=", {lhs, postfix()});
    if (accept(Tok::Neq)) return Formula::negation(Formula::pred("=", {lhs, postfix()}));
    return lhs;
  }

  Formula postfix() {
    Formula f = primary();
    ChainGuard chain(*this);
    while (at(Tok::LParen)) {
      next();
      std::vector<Formula> args = arguments();
      if (args.empty()) throw ParseError(peek().offset, "an argument");
      for (auto& a : args) {
        chain.link();
        f = Formula::app(f, std::move(a));
      }
    }
    return f;
  }

  Formula primary() {
    DepthGuard g(*this);
    if (at(Tok::Ident)) {
      Token id = next();
      if (at(Tok::LParen)) {
        next();
        return Formula::pred(std::move(id.text), arguments());
      }
      if (opts_.strict &&
          std::find(bound_.begin(), bound_.end(), id.text) == bound_.end()) {
        throw Error(Errc::UnboundVar, "unbound variable '" + id.text + "' at byte " +
                                          std::to_string(id.offset));
      }
      return Formula::var(std::move(id.text));
    }
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    throw ParseError(peek().offset, "a predicate, variable, quantifier or '('");
  }

  // Consumes "a, b, c)" after the opening parenthesis.
  std::vector<Formula> arguments() {
    std::vector<Formula> args;
    if (accept(Tok::RParen)) return args;
    do {
      args.push_back(formula());
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "',' or ')'");
    return args;
  }

  // type := atom [('→' | '->') type] ; atom := ident | '<' type ',' type '>' | '(' type ')'
  std::string type_expr() {
    DepthGuard g(*this);
    std::string lhs = type_atom();
    if (accept(Tok::Implies)) return lhs + "\xE2\x86\x92" + type_expr();
    return lhs;
  }

  std::string type_atom() {
    DepthGuard g(*this);
    if (at(Tok::Ident)) return next().text;
    if (accept(Tok::LAngle)) {
      std::string a = type_expr();
      expect(Tok::Comma, "',' in a type pair");
      std::string b = type_expr();
      expect(Tok::RAngle, "'>' closing a type pair");
      return "<" + a + "," + b + ">";
    }
    if (accept(Tok::LParen)) {
      std::string t = type_expr();
      expect(Tok::RParen, "')' closing a type");
      return "(" + t + ")";
    }
    throw ParseError(peek().offset, "a type");
  }

  std::vector<Token> toks_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::string> bound_;
};

std::string_view strip_fence(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  if (s.starts_with("```")) {
    auto nl = s.find('\n');
    if (nl == std::string_view::npos) return s;
    s.remove_prefix(nl + 1);
    s = trim(s);
    if (s.ends_with("```")) s.remove_suffix(3);
    return trim(s);
  }
  if (s.size() >= 2 && s.front() == '`' && s.back() == '`') {
    s.remove_prefix(1);
    s.remove_suffix(1);
  }
  return s;
}

// ---------------------------------------------------------------- printer

// Context levels: 0 top/binder body/argument, 1 implication, 2 disjunction,
// 3 conjunction, 4 unary, 5 comparison operand.
class Printer {
 public:
  explicit Printer(Notation n) : ascii_(n == Notation::Ascii) {}

  void print(const Formula& f, int ctx) {
    switch (f.kind()) {
      case NodeKind::Var:
        out_ += f.name();
        return;
      case NodeKind::Pred:
        if (f.name() == "=" && f.children().size() == 2) {
          wrap(ctx > 4, [&] {
            print_operand(f.lhs());
            out_ += " = ";
            print_operand(f.rhs());
          });
          return;
        }
        out_ += f.name();
        out_ += '(';
        for (std::size_t i = 0; i < f.children().size(); ++i) {
          if (i) out_ += ", ";
          print(f.children()[i], 0);
        }
        out_ += ')';
        return;
      case NodeKind::Not:
        wrap(ctx > 4, [&] {
          out_ += ascii_ ? "not " : "\xC2\xAC";
          print(f.body(), 4);
        });
        return;
      case NodeKind::Quant:
        wrap(ctx > 0, [&] {
          if (ascii_) {
            out_ += f.quantifier() == Quantifier::Forall ? "forall " : "exists ";
          } else {
            out_ += f.quantifier() == Quantifier::Forall ? "\xE2\x88\x80" : "\xE2\x88\x83";
          }
          binder(f);
          print(f.body(), 0);
        });
        return;
      case NodeKind::Lambda:
        wrap(ctx > 0, [&] {
          out_ += ascii_ ? "lam " : "\xCE\xBB";
          binder(f);
          print(f.body(), 0);
        });
        return;
      case NodeKind::And:
        wrap(ctx > 3, [&] {
          print(f.lhs(), 3);
          out_ += ascii_ ? " & " : " \xE2\x88\xA7 ";
          print(f.rhs(), 4);
        });
        return;
      case NodeKind::Or:
        wrap(ctx > 2, [&] {
          print(f.lhs(), 2);
          out_ += ascii_ ? " | " : " \xE2\x88\xA8 ";
          print(f.rhs(), 3);
        });
        return;
      case NodeKind::Implies:
        wrap(ctx > 1, [&] {
          print(f.lhs(), 2);
          out_ += ascii_ ? " -> " : " \xE2\x86\x92 ";
          print(f.rhs(), 1);
        });
        return;
      case NodeKind::App: {
        const Formula& fn = f.lhs();
        bool postfix_ok = fn.kind() == NodeKind::App ||
                          (fn.kind() == NodeKind::Pred && fn.name() != "=");
        wrap(!postfix_ok, [&] { print(fn, 0); });
        out_ += '(';
        print(f.rhs(), 0);
        out_ += ')';
        return;
      }
    }
  }

  std::string take() { return std::move(out_); }

 private:
  template <typename F>
  void wrap(bool parens, F&& body) {
    if (parens) out_ += '(';
    body();
    if (parens) out_ += ')';
  }

  // Operands of '=' must be postfix-level expressions.
  void print_operand(const Formula& f) {
    bool atomic = f.kind() == NodeKind::Var || f.kind() == NodeKind::App ||
                  (f.kind() == NodeKind::Pred && f.name() != "=");
    wrap(!atomic, [&] { print(f, 0); });
  }

  void binder(const Formula& f) {
    out_ += f.name();
    if (!f.type_tag().empty()) {
      out_ += ':';
      if (ascii_) {
        std::string t = f.type_tag();
        std::string arrow = "\xE2\x86\x92";
        for (std::size_t p = t.find(arrow); p != std::string::npos; p = t.find(arrow, p)) {
          t.replace(p, arrow.size(), "->");
        }
        out_ += t;
      } else {
        out_ += f.type_tag();
      }
    }
    out_ += ". ";
  }

  bool ascii_;
  std::string out_;
};

template <typename Visit>
void preorder(const Formula& f, std::size_t& counter, Visit&& visit) {
  visit(f, counter++);
  for (const auto& c : f.children()) preorder(c, counter, visit);
}

// ¬ reaching ∃ through connectives and λ only.
bool reaches_exists(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Quant:
      return f.quantifier() == Quantifier::Exists;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
      return reaches_exists(f.lhs()) || reaches_exists(f.rhs());
    case NodeKind::Lambda:
      return reaches_exists(f.body());
    default:
      return false;
  }
}

// A ¬ inside an ∃ body, not below a deeper quantifier.
bool holds_negation(const Formula& f) {
  if (f.kind() == NodeKind::Not) return true;
  if (f.kind() == NodeKind::Quant) return false;
  for (const auto& c : f.children()) {
    if (holds_negation(c)) return true;
  }
  return false;
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& seen,
                  std::vector<std::string>& out) {
  switch (f.kind()) {
    case NodeKind::Var:
      if (std::find(bound.begin(), bound.end(), f.name()) == bound.end() &&
          seen.insert(f.name()).second) {
        out.push_back(f.name());
      }
      return;
    case NodeKind::Quant:
    case NodeKind::Lambda:
      bound.push_back(f.name());
      collect_free(f.body(), bound, seen, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : f.children()) collect_free(c, bound, seen, out);
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const ParseOptions& opts) {
  std::string_view body = strip_fence(text);
  std::size_t shift = static_cast<std::size_t>(body.data() - text.data());
  try {
    Parser p(lex(body), opts);
    return p.parse_all();
  } catch (const ParseError& e) {
    if (shift == 0) throw;
    throw ParseError(e.offset() + shift, e.expected());
  }
}

std::string pretty(const Formula& f, Notation notation) {
  Printer p(notation);
  p.print(f, 0);
  return p.take();
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  std::set<std::string> seen;
  collect_free(f, bound, seen, out);
  return out;
}

std::vector<PolarityEvent> polarity_sequence(const Formula& f) {
  std::vector<PolarityEvent> out;
  std::size_t counter = 0;
  preorder(f, counter, [&](const Formula& n, std::size_t pos) {
    if (n.kind() == NodeKind::Not) {
      out.push_back({PolarityEventKind::Not, pos});
    } else if (n.kind() == NodeKind::Quant) {
      out.push_back({n.quantifier() == Quantifier::Forall ? PolarityEventKind::Forall
                                                           : PolarityEventKind::Exists,
                     pos});
    }
  });
  return out;
}

LocalShape local_shape(const Formula& f) {
  bool neg_exists = false, exists_neg = false, any_forall = false, any_exists = false;
  std::size_t counter = 0;
  preorder(f, counter, [&](const Formula& n, std::size_t) {
    if (n.kind() == NodeKind::Not && reaches_exists(n.body())) neg_exists = true;
    if (n.kind() == NodeKind::Quant) {
      if (n.quantifier() == Quantifier::Forall) {
        any_forall = true;
      } else {
        any_exists = true;
        if (holds_negation(n.body())) exists_neg = true;
      }
    }
  });
  if (neg_exists) return LocalShape::NegExists;
  if (exists_neg) return LocalShape::ExistsNeg;
  if (any_forall) return LocalShape::ForallPlain;
  if (any_exists) return LocalShape::ExistsPlain;
  return LocalShape::None;
}

std::optional<PairPattern> match_pair_pattern(const Formula& a, const Formula& b) {
  LocalShape sa = local_shape(a);
  LocalShape sb = local_shape(b);
  if (sa == LocalShape::ForallPlain && sb == LocalShape::NegExists) {
    return PairPattern::ForallNotExists;
  }
  if (sa == LocalShape::ForallPlain && sb == LocalShape::ExistsNeg) {
    return PairPattern::ForallExistsNot;
  }
  if (sa == LocalShape::ExistsPlain && sb == LocalShape::ExistsNeg) {
    return PairPattern::ExistsExistsNot;
  }
  return std::nullopt;
}

std::optional<PairPattern> intra_formula_pattern(const Formula& f) {
  auto seq = polarity_sequence(f);
  auto find_from = [&](std::size_t start, PolarityEventKind a, PolarityEventKind b) {
    for (std::size_t i = start; i + 1 < seq.size(); ++i) {
      if (seq[i].event == a && seq[i + 1].event == b) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].event == PolarityEventKind::Forall) {
      if (find_from(i + 1, PolarityEventKind::Not, PolarityEventKind::Exists)) {
        return PairPattern::ForallNotExists;
      }
      if (find_from(i + 1, PolarityEventKind::Exists, PolarityEventKind::Not)) {
        return PairPattern::ForallExistsNot;
      }
    }
    if (seq[i].event == PolarityEventKind::Exists &&
        find_from(i + 1, PolarityEventKind::Exists, PolarityEventKind::Not)) {
      return PairPattern::ExistsExistsNot;
    }
  }
  return std::nullopt;
}

std::string_view to_string(LocalShape shape) {
  switch (shape) {
    case LocalShape::ForallPlain: return "forall";
    case LocalShape::ExistsNeg: return "exists_not";
    case LocalShape::NegExists: return "not_exists";
    case LocalShape::ExistsPlain: return "exists";
    case LocalShape::None: return "none";
  }
  return "none";
}

std::string_view to_string(PairPattern pattern) {
  switch (pattern) {
    case PairPattern::ForallExistsNot: return "forall..exists_not";
    case PairPattern::ForallNotExists: return "forall..not_exists";
    case PairPattern::ExistsExistsNot: return "exists..exists_not";
  }
  return "";
}

std::string_view to_string(PolarityEventKind kind) {
  switch (kind) {
    case PolarityEventKind::Forall: return "forall";
    case PolarityEventKind::Exists: return "exists";
    case PolarityEventKind::Not: return "not";
  }
  return "";
}

}  // namespace negtax::logic

#include "timebound/parser.hpp"

#include <cctype>
#include <sstream>

namespace timebound {

namespace {

enum class Tok {
  Ident,
  Integer,
  KwSkip,
  KwWhile,
  KwDo,
  KwEnd,
  KwIf,
  KwThen,
  KwElse,
  KwFor,
  KwTo,
  KwForall,
  KwExists,
  KwSum,
  KwLog,
  KwMax,
  KwTrue,
  KwFalse,
  KwAnd,
  KwOr,
  KwNot,
  KwInvariant,
  KwVariant,
  KwBound,
  KwCost,
  KwFun,
  KwAmortized,
  KwPotential,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Semi,
  Comma,
  Dot,
  Pipe,
  Colon,
  Eq,
  Neq,
  Lt,
  Gt,
  Le,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  Arrow,
  Implies,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const std::map<std::string, Tok>& keyword_table() {
  static const std::map<std::string, Tok> table = {
      {"skip", Tok::KwSkip},     {"while", Tok::KwWhile},
      {"do", Tok::KwDo},         {"end", Tok::KwEnd},
      {"if", Tok::KwIf},         {"then", Tok::KwThen},
      {"else", Tok::KwElse},     {"for", Tok::KwFor},
      {"to", Tok::KwTo},         {"forall", Tok::KwForall},
      {"exists", Tok::KwExists}, {"sum", Tok::KwSum},
      {"log", Tok::KwLog},       {"max", Tok::KwMax},
      {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
      {"and", Tok::KwAnd},       {"or", Tok::KwOr},
      {"not", Tok::KwNot},       {"invariant", Tok::KwInvariant},
      {"variant", Tok::KwVariant}, {"bound", Tok::KwBound},
      {"cost", Tok::KwCost},     {"fun", Tok::KwFun},
      {"amortized", Tok::KwAmortized}, {"potential", Tok::KwPotential},
  };
  return table;
}

std::vector<Token> lex(const std::string& source) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::string text, int start_col) {
    SourceSpan span{line, start_col, static_cast<int>(text.size())};
    tokens.push_back({kind, std::move(text), span});
  };
  while (i < source.size()) {
    char c = source[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++column;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < source.size() && source[i] != '\n') ++i;
      continue;
    }
    int start_col = column;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[i])) || source[i] == '_' ||
              source[i] == '\''))
        ++i;
      std::string text = source.substr(start, i - start);
      column += static_cast<int>(text.size());
      auto kw = keyword_table().find(text);
      push(kw == keyword_table().end() ? Tok::Ident : kw->second, std::move(text), start_col);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < source.size() && std::isdigit(static_cast<unsigned char>(source[i]))) ++i;
      std::string text = source.substr(start, i - start);
      column += static_cast<int>(text.size());
      push(Tok::Integer, std::move(text), start_col);
      continue;
    }
    auto two = [&](char second) {
      return i + 1 < source.size() && source[i + 1] == second;
    };
    Tok kind;
    std::string text(1, c);
    switch (c) {
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ';': kind = Tok::Semi; break;
      case ',': kind = Tok::Comma; break;
      case '.': kind = Tok::Dot; break;
      case '|': kind = Tok::Pipe; break;
      case ':': kind = Tok::Colon; break;
      case '+': kind = Tok::Plus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '=':
        if (two('>')) {
          kind = Tok::Implies;
          text = "=>";
        } else {
          kind = Tok::Eq;
        }
        break;
      case '-':
        if (two('>')) {
          kind = Tok::Arrow;
          text = "->";
        } else {
          kind = Tok::Minus;
        }
        break;
      case '!':
        if (two('=')) {
          kind = Tok::Neq;
          text = "!=";
        } else {
          throw ParseError(SourceSpan{line, start_col, 1}, "stray '!' (did you mean '!='?)");
        }
        break;
      case '<':
        if (two('=')) {
          kind = Tok::Le;
          text = "<=";
        } else {
          kind = Tok::Lt;
        }
        break;
      case '>':
        if (two('=')) {
          kind = Tok::Ge;
          text = ">=";
        } else {
          kind = Tok::Gt;
        }
        break;
      default:
        throw ParseError(SourceSpan{line, start_col, 1},
                         std::string("unexpected character '") + c + "'");
    }
    i += text.size();
    column += static_cast<int>(text.size());
    push(kind, std::move(text), start_col);
  }
  tokens.push_back({Tok::Eof, "", SourceSpan{line, column, 0}});
  return tokens;
}

struct LoopRecord {
  int id;
  bool is_for;
  SourceSpan span;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, VerifMode mode)
      : tokens_(std::move(tokens)), mode_(mode) {}

  AnnotatedProgram parse_program_body() {
    expect(Tok::LBrace, "{");
    AssertPtr pre = parse_assertion_expr();
    expect(Tok::RBrace, "}");
    StmtPtr body = parse_stmt_seq();
    expect(Tok::LBrace, "{");
    AssertPtr post = parse_assertion_expr();
    expect(Tok::Pipe, "|");
    ArithPtr bound = parse_arith_expr();
    expect(Tok::RBrace, "}");
    expect(Tok::Eof, "end of input");
    check_oracle_completeness();
    AnnotatedProgram p;
    p.mode = mode_;
    p.precondition = pre;
    p.body = body;
    p.postcondition = post;
    p.cost_bound = bound;
    p.oracle = std::move(oracle_);
    return p;
  }

  ArithPtr parse_whole_arith() {
    ArithPtr e = parse_arith_expr();
    expect(Tok::Eof, "end of input");
    return e;
  }

  AssertPtr parse_whole_assertion() {
    AssertPtr a = parse_assertion_expr();
    expect(Tok::Eof, "end of input");
    return a;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& peek2() const {
    return tokens_[pos_ + 1 < tokens_.size() ? pos_ + 1 : tokens_.size() - 1];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  Token advance() { return tokens_[pos_++]; }

  /// A `[` right before an annotation field keyword opens a loop annotation
  /// block, never an array index; conditions like `y <= r [invariant: ...]`
  /// need this one token of lookahead.
  bool at_annotation_block() const {
    if (!at(Tok::LBracket)) return false;
    switch (peek2().kind) {
      case Tok::KwInvariant:
      case Tok::KwVariant:
      case Tok::KwBound:
      case Tok::KwCost:
      case Tok::KwAmortized:
      case Tok::KwPotential:
        return true;
      default:
        return false;
    }
  }

  [[noreturn]] void fail(SourceSpan span, const std::string& message,
                         std::vector<std::string> expected = {}) {
    throw ParseError(span, message, std::move(expected));
  }

  Token expect(Tok kind, const std::string& what) {
    if (!at(kind)) {
      const Token& t = peek();
      fail(t.span,
           "expected " + what + " but found " + (t.text.empty() ? "end of input" : "'" + t.text + "'"),
           {what});
    }
    return advance();
  }

  // -- arithmetic ----------------------------------------------------------

  ArithPtr parse_arith_expr() { return parse_additive(); }

  ArithPtr parse_additive() {
    ArithPtr lhs = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      ArithOp op = at(Tok::Plus) ? ArithOp::Add : ArithOp::Sub;
      advance();
      lhs = mk_bin(op, lhs, parse_multiplicative());
    }
    return lhs;
  }

  ArithPtr parse_multiplicative() {
    ArithPtr lhs = parse_power();
    while (at(Tok::Star) || at(Tok::Slash)) {
      ArithOp op = at(Tok::Star) ? ArithOp::Mul : ArithOp::Div;
      advance();
      lhs = mk_bin(op, lhs, parse_power());
    }
    return lhs;
  }

  ArithPtr parse_power() {
    ArithPtr lhs = parse_atom();
    if (at(Tok::Caret)) {
      advance();
      return mk_pow(lhs, parse_power());  // right-associative
    }
    return lhs;
  }

  ArithPtr parse_atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Integer:
        advance();
        return mk_int(Int(t.text));
      case Tok::Minus: {
        advance();
        Token num = expect(Tok::Integer, "integer literal");
        return mk_int(-Int(num.text));
      }
      case Tok::Ident: {
        advance();
        if (at(Tok::LBracket) && !at_annotation_block()) {
          advance();
          ArithPtr index = parse_arith_expr();
          expect(Tok::RBracket, "]");
          return mk_arr_read(t.text, index);
        }
        return mk_var(t.text);
      }
      case Tok::LParen: {
        advance();
        ArithPtr e = parse_arith_expr();
        expect(Tok::RParen, ")");
        return e;
      }
      case Tok::KwSum: {
        advance();
        expect(Tok::LParen, "(");
        Token binder = expect(Tok::Ident, "sum binder");
        expect(Tok::Comma, ",");
        ArithPtr lower = parse_arith_expr();
        expect(Tok::Comma, ",");
        ArithPtr upper = parse_arith_expr();
        expect(Tok::Comma, ",");
        ArithPtr body = parse_arith_expr();
        expect(Tok::RParen, ")");
        return mk_sum(binder.text, lower, upper, body);
      }
      case Tok::KwLog: {
        advance();
        expect(Tok::LParen, "(");
        ArithPtr arg = parse_arith_expr();
        expect(Tok::RParen, ")");
        return mk_log2(arg);
      }
      case Tok::KwMax: {
        advance();
        expect(Tok::LParen, "(");
        ArithPtr lhs = parse_arith_expr();
        expect(Tok::Comma, ",");
        ArithPtr rhs = parse_arith_expr();
        expect(Tok::RParen, ")");
        return mk_max(lhs, rhs);
      }
      default:
        fail(t.span, "expected an arithmetic expression",
             {"integer", "identifier", "(", "sum", "log", "max"});
    }
  }

  std::optional<CmpOp> peek_cmp() const {
    switch (peek().kind) {
      case Tok::Eq: return CmpOp::Eq;
      case Tok::Neq: return CmpOp::Neq;
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Ge: return CmpOp::Ge;
      default: return std::nullopt;
    }
  }

  // -- assertions ----------------------------------------------------------

  AssertPtr parse_assertion_expr() {
    if (at(Tok::KwForall) || at(Tok::KwExists)) {
      Quant quant = at(Tok::KwForall) ? Quant::Forall : Quant::Exists;
      advance();
      Token binder = expect(Tok::Ident, "quantified variable");
      expect(Tok::Dot, ".");
      return mk_quant(quant, binder.text, parse_assertion_expr());  // scopes to the end
    }
    return parse_implication();
  }

  AssertPtr parse_implication() {
    AssertPtr lhs = parse_disjunction();
    if (at(Tok::Implies)) {
      advance();
      // Right-associative; a quantifier after => scopes to the end, so
      // P => forall x. Q reads as P => (forall x. Q).
      return mk_implies(lhs, parse_assertion_expr());
    }
    return lhs;
  }

  AssertPtr parse_disjunction() {
    AssertPtr lhs = parse_conjunction();
    while (at(Tok::KwOr)) {
      advance();
      lhs = mk_or(lhs, parse_conjunction());
    }
    return lhs;
  }

  AssertPtr parse_conjunction() {
    AssertPtr lhs = parse_negation();
    while (at(Tok::KwAnd)) {
      advance();
      lhs = mk_and(lhs, parse_negation());
    }
    return lhs;
  }

  AssertPtr parse_negation() {
    if (at(Tok::KwNot)) {
      advance();
      return mk_anot(parse_negation());
    }
    return parse_assert_atom();
  }

  /// A comparison between arithmetic expressions, a boolean constant, or a
  /// parenthesized assertion. `(` is ambiguous between arithmetic and
  /// assertion grouping, so try the comparison reading first and fall back.
  AssertPtr parse_assert_atom() {
    if (at(Tok::KwTrue)) {
      advance();
      return mk_abool(true);
    }
    if (at(Tok::KwFalse)) {
      advance();
      return mk_abool(false);
    }
    const std::size_t save = pos_;
    try {
      ArithPtr lhs = parse_arith_expr();
      auto op = peek_cmp();
      if (!op)
        fail(peek().span, "expected a comparison operator", {"=", "!=", "<", ">", "<=", ">="});
      advance();
      ArithPtr rhs = parse_arith_expr();
      return mk_acmp(*op, lhs, rhs);
    } catch (const ParseError& arith_err) {
      const std::size_t arith_reached = pos_;
      pos_ = save;
      if (!at(Tok::LParen)) throw;
      try {
        advance();
        AssertPtr inner = parse_assertion_expr();
        expect(Tok::RParen, ")");
        return inner;
      } catch (const ParseError&) {
        // Report whichever reading consumed more input.
        if (arith_reached > pos_) throw arith_err;
        throw;
      }
    }
  }

  // -- executable conditions ----------------------------------------------

  BoolPtr assertion_to_bool(const AssertPtr& a, SourceSpan span) {
    return std::visit(
        [&](const auto& n) -> BoolPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ABool>) {
            return mk_bool(n.value);
          } else if constexpr (std::is_same_v<T, ACmp>) {
            return mk_cmp(n.op, n.lhs, n.rhs);
          } else if constexpr (std::is_same_v<T, ANot>) {
            return mk_not(assertion_to_bool(n.arg, span));
          } else if constexpr (std::is_same_v<T, ABin>) {
            if (n.op == AConn::Implies)
              fail(span, "implication is not allowed in executable conditions");
            return mk_bbin(n.op == AConn::And ? BoolOp::And : BoolOp::Or,
                           assertion_to_bool(n.lhs, span), assertion_to_bool(n.rhs, span));
          } else {
            static_assert(std::is_same_v<T, AQuant>);
            fail(span, "quantifiers are not allowed in executable conditions");
          }
        },
        a->node);
  }

  BoolPtr parse_condition() {
    SourceSpan span = peek().span;
    return assertion_to_bool(parse_assertion_expr(), span);
  }

  // -- statements ----------------------------------------------------------

  StmtPtr parse_stmt_seq() {
    StmtPtr first = parse_stmt_one();
    if (at(Tok::Semi)) {
      advance();
      StmtPtr rest = parse_stmt_seq();  // right-nested
      return mk_seq(first, rest, first->span);
    }
    return first;
  }

  StmtPtr parse_stmt_one() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::KwSkip:
        advance();
        return mk_skip(t.span);
      case Tok::KwWhile:
        return parse_while();
      case Tok::KwIf:
        return parse_if();
      case Tok::KwFor:
        return parse_for();
      case Tok::Ident: {
        advance();
        if (at(Tok::LBracket)) {
          advance();
          ArithPtr index = parse_arith_expr();
          expect(Tok::RBracket, "]");
          expect(Tok::Eq, "=");
          return mk_arr_assign(t.text, index, parse_arith_expr(), t.span);
        }
        expect(Tok::Eq, "=");
        return mk_assign(t.text, parse_arith_expr(), t.span);
      }
      default:
        fail(t.span, "expected a statement", {"skip", "while", "if", "for", "identifier"});
    }
  }

  StmtPtr parse_while() {
    const Token kw = advance();
    if (mode_ == VerifMode::Exact) fail(kw.span, "while not allowed in exact mode");
    const int id = next_loop_id_++;
    BoolPtr cond = parse_condition();
    OracleInfo info;
    if (at(Tok::LBracket)) info = parse_annotation_block(/*for_loop=*/false);
    oracle_[id] = std::move(info);
    loops_.push_back({id, false, kw.span});
    expect(Tok::KwDo, "do");
    StmtPtr body = parse_stmt_seq();
    expect(Tok::KwEnd, "end");
    return mk_while(id, cond, body, kw.span);
  }

  StmtPtr parse_if() {
    const Token kw = advance();
    BoolPtr cond = parse_condition();
    expect(Tok::KwThen, "then");
    StmtPtr then_branch = parse_stmt_seq();
    expect(Tok::KwElse, "else");
    StmtPtr else_branch = parse_stmt_seq();
    expect(Tok::KwEnd, "end");
    return mk_if(cond, then_branch, else_branch, kw.span);
  }

  StmtPtr parse_for() {
    const Token kw = advance();
    if (mode_ != VerifMode::Exact)
      fail(kw.span, "for not allowed in " + to_string(mode_) + " mode");
    const int id = next_loop_id_++;
    Token binder = expect(Tok::Ident, "loop variable");
    expect(Tok::Eq, "=");
    bool negative = false;
    if (at(Tok::Minus)) {
      advance();
      negative = true;
    }
    Token low = expect(Tok::Integer, "integer lower bound");
    Int lower = Int(low.text);
    if (negative) lower = -lower;
    expect(Tok::KwTo, "to");
    ArithPtr upper = parse_arith_expr();
    OracleInfo info;
    if (at(Tok::LBracket)) info = parse_annotation_block(/*for_loop=*/true);
    oracle_[id] = std::move(info);
    loops_.push_back({id, true, kw.span});
    expect(Tok::KwDo, "do");
    StmtPtr body = parse_stmt_seq();
    expect(Tok::KwEnd, "end");
    return mk_for(id, binder.text, lower, upper, body, kw.span);
  }

  OracleInfo parse_annotation_block(bool for_loop) {
    expect(Tok::LBracket, "[");
    OracleInfo info;
    std::set<std::string> seen;
    while (true) {
      const Token field = peek();
      std::string name;
      switch (field.kind) {
        case Tok::KwInvariant: name = "invariant"; break;
        case Tok::KwVariant: name = "variant"; break;
        case Tok::KwBound: name = "bound"; break;
        case Tok::KwCost: name = "cost"; break;
        case Tok::KwAmortized: name = "amortized"; break;
        case Tok::KwPotential: name = "potential"; break;
        default:
          fail(field.span, "expected an annotation field",
               {"invariant", "variant", "bound", "cost", "amortized", "potential"});
      }
      advance();
      if (for_loop && name != "invariant")
        fail(field.span, "only invariant annotations are allowed on for loops");
      if (!seen.insert(name).second) fail(field.span, "duplicate " + name + " annotation");
      expect(Tok::Colon, ":");
      if (name == "invariant") {
        info.invariant = parse_assertion_expr();
      } else if (name == "variant") {
        info.variant = parse_arith_expr();
      } else if (name == "bound") {
        info.iter_bound = parse_arith_expr();
      } else if (name == "amortized") {
        info.amortized_cost = parse_arith_expr();
      } else if (name == "potential") {
        info.potential = parse_arith_expr();
      } else {
        expect(Tok::KwFun, "fun");
        Token binder = expect(Tok::Ident, "cost function binder");
        expect(Tok::Arrow, "->");
        info.cost_fn = CostFn{binder.text, parse_arith_expr()};
      }
      if (at(Tok::Semi)) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::RBracket, "]");
    return info;
  }

  void check_oracle_completeness() {
    for (const LoopRecord& loop : loops_) {
      const OracleInfo& info = oracle_[loop.id];
      std::string missing;
      auto need = [&](bool present, const char* field) {
        if (missing.empty() && !present) missing = field;
      };
      if (loop.is_for) {
        need(info.invariant != nullptr, "invariant");
      } else if (mode_ == VerifMode::Classic) {
        need(info.invariant != nullptr, "invariant");
        need(info.variant != nullptr, "variant");
        need(info.iter_bound != nullptr, "bound");
        need(info.cost_fn.has_value(), "cost");
      } else {
        need(info.invariant != nullptr, "invariant");
        need(info.variant != nullptr, "variant");
        need(info.iter_bound != nullptr, "bound");
        need(info.amortized_cost != nullptr, "amortized");
        need(info.potential != nullptr, "potential");
      }
      if (!missing.empty())
        throw ParseError(loop.span,
                         "loop " + std::to_string(loop.id) + ": missing " + missing +
                             " annotation required by " + to_string(mode_) + " mode",
                         {}, /*oracle_missing=*/true);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  VerifMode mode_;
  int next_loop_id_ = 0;
  std::map<int, OracleInfo> oracle_;
  std::vector<LoopRecord> loops_;
};

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::optional<VerifMode> mode_header(const std::string& source) {
  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] != '#') break;  // the header must precede any code
    const std::string prefix = "#mode:";
    if (line.compare(0, prefix.size(), prefix) != 0) continue;
    std::string name = trim(line.substr(prefix.size()));
    auto mode = mode_from_string(name);
    if (!mode)
      throw ParseError(SourceSpan{line_no, 1, static_cast<int>(raw.size())},
                       "unknown mode '" + name + "'", {"classic", "amortized", "exact"});
    return mode;
  }
  return std::nullopt;
}

AnnotatedProgram parse_program(const std::string& source,
                               std::optional<VerifMode> mode_override) {
  VerifMode mode = VerifMode::Classic;
  if (auto declared = mode_header(source)) mode = *declared;
  if (mode_override) mode = *mode_override;
  Parser parser(lex(source), mode);
  return parser.parse_program_body();
}

CostModel parse_cost_model(const std::string& source) {
  CostModel model = CostModel::unit();
  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    SourceSpan span{line_no, 1, static_cast<int>(raw.size())};
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(span, "expected 'NAME = value'", {"="});
    std::string name = trim(line.substr(0, eq));
    std::string value_text = trim(line.substr(eq + 1));
    if (name.empty()) throw ParseError(span, "missing cost name before '='");
    bool negative = !value_text.empty() && value_text[0] == '-';
    std::string digits = negative ? trim(value_text.substr(1)) : value_text;
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(span, "cost value must be an integer literal");
    Int value = Int(digits);
    if (negative) value = -value;
    try {
      model.set(name, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(span, e.what());
    }
  }
  return model;
}

ArithPtr parse_arith(const std::string& source) {
  Parser parser(lex(source), VerifMode::Classic);
  return parser.parse_whole_arith();
}

AssertPtr parse_assertion(const std::string& source) {
  Parser parser(lex(source), VerifMode::Classic);
  return parser.parse_whole_assertion();
}

// --------------------------------------------------------------------------
// Pretty-printing
// --------------------------------------------------------------------------

namespace {

// Precedence levels; a node is parenthesized when its level is below what
// the context requires.
constexpr int kAddPrec = 1;
constexpr int kMulPrec = 2;
constexpr int kPowPrec = 3;

void print_arith(std::ostream& os, const ArithPtr& e, int parent) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntConst>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, ArrRead>) {
          os << n.array << '[';
          print_arith(os, n.index, 0);
          os << ']';
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          int prec = 0;
          const char* op = nullptr;
          switch (n.op) {
            case ArithOp::Add: prec = kAddPrec; op = "+"; break;
            case ArithOp::Sub: prec = kAddPrec; op = "-"; break;
            case ArithOp::Mul: prec = kMulPrec; op = "*"; break;
            case ArithOp::Div: prec = kMulPrec; op = "/"; break;
            case ArithOp::Pow: prec = kPowPrec; op = "^"; break;
          }
          bool parens = prec < parent;
          if (parens) os << '(';
          if (n.op == ArithOp::Pow) {
            print_arith(os, n.lhs, prec + 1);  // right-associative
            os << ' ' << op << ' ';
            print_arith(os, n.rhs, prec);
          } else {
            print_arith(os, n.lhs, prec);  // left-associative
            os << ' ' << op << ' ';
            print_arith(os, n.rhs, prec + 1);
          }
          if (parens) os << ')';
        } else if constexpr (std::is_same_v<T, MaxExpr>) {
          os << "max(";
          print_arith(os, n.lhs, 0);
          os << ", ";
          print_arith(os, n.rhs, 0);
          os << ')';
        } else if constexpr (std::is_same_v<T, LogTwo>) {
          os << "log(";
          print_arith(os, n.arg, 0);
          os << ')';
        } else {
          static_assert(std::is_same_v<T, SumExpr>);
          os << "sum(" << n.binder << ", ";
          print_arith(os, n.lower, 0);
          os << ", ";
          print_arith(os, n.upper, 0);
          os << ", ";
          print_arith(os, n.body, 0);
          os << ')';
        }
      },
      e->node);
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Neq: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

constexpr int kImpliesPrec = 1;
constexpr int kOrPrec = 2;
constexpr int kAndPrec = 3;
constexpr int kNotPrec = 4;

void print_assert(std::ostream& os, const AssertPtr& a, int parent) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ABool>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, ACmp>) {
          print_arith(os, n.lhs, 0);
          os << ' ' << cmp_text(n.op) << ' ';
          print_arith(os, n.rhs, 0);
        } else if constexpr (std::is_same_v<T, ANot>) {
          bool parens = kNotPrec < parent;
          if (parens) os << '(';
          os << "not ";
          print_assert(os, n.arg, kNotPrec);
          if (parens) os << ')';
        } else if constexpr (std::is_same_v<T, ABin>) {
          int prec = 0;
          const char* op = nullptr;
          switch (n.op) {
            case AConn::And: prec = kAndPrec; op = "and"; break;
            case AConn::Or: prec = kOrPrec; op = "or"; break;
            case AConn::Implies: prec = kImpliesPrec; op = "=>"; break;
          }
          bool parens = prec < parent;
          if (parens) os << '(';
          if (n.op == AConn::Implies) {
            print_assert(os, n.lhs, prec + 1);  // right-associative
            os << ' ' << op << ' ';
            print_assert(os, n.rhs, prec);
          } else {
            print_assert(os, n.lhs, prec);
            os << ' ' << op << ' ';
            print_assert(os, n.rhs, prec + 1);
          }
          if (parens) os << ')';
        } else {
          static_assert(std::is_same_v<T, AQuant>);
          bool parens = parent > 0;
          if (parens) os << '(';
          os << (n.quant == Quant::Forall ? "forall " : "exists ") << n.binder << ". ";
          print_assert(os, n.body, 0);
          if (parens) os << ')';
        }
      },
      a->node);
}

constexpr int kBOrPrec = 1;
constexpr int kBAndPrec = 2;
constexpr int kBNotPrec = 3;

void print_bool(std::ostream& os, const BoolPtr& b, int parent) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoolConst>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, Cmp>) {
          print_arith(os, n.lhs, 0);
          os << ' ' << cmp_text(n.op) << ' ';
          print_arith(os, n.rhs, 0);
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          bool parens = kBNotPrec < parent;
          if (parens) os << '(';
          os << "not ";
          print_bool(os, n.arg, kBNotPrec);
          if (parens) os << ')';
        } else {
          static_assert(std::is_same_v<T, BoolBin>);
          int prec = n.op == BoolOp::And ? kBAndPrec : kBOrPrec;
          bool parens = prec < parent;
          if (parens) os << '(';
          print_bool(os, n.lhs, prec);
          os << (n.op == BoolOp::And ? " and " : " or ");
          print_bool(os, n.rhs, prec + 1);
          if (parens) os << ')';
        }
      },
      b->node);
}

void print_annotations(std::ostream& os, const OracleInfo& info) {
  os << '[';
  bool first = true;
  auto sep = [&] {
    if (!first) os << "; ";
    first = false;
  };
  if (info.invariant) {
    sep();
    os << "invariant: ";
    print_assert(os, info.invariant, 0);
  }
  if (info.variant) {
    sep();
    os << "variant: ";
    print_arith(os, info.variant, 0);
  }
  if (info.iter_bound) {
    sep();
    os << "bound: ";
    print_arith(os, info.iter_bound, 0);
  }
  if (info.cost_fn) {
    sep();
    os << "cost: fun " << info.cost_fn->binder << " -> ";
    print_arith(os, info.cost_fn->body, 0);
  }
  if (info.amortized_cost) {
    sep();
    os << "amortized: ";
    print_arith(os, info.amortized_cost, 0);
  }
  if (info.potential) {
    sep();
    os << "potential: ";
    print_arith(os, info.potential, 0);
  }
  os << ']';
}

void print_stmt_rec(std::ostream& os, const StmtPtr& s, int indent,
                    const std::map<int, OracleInfo>* oracle) {
  std::string pad(indent, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip>) {
          os << pad << "skip";
        } else if constexpr (std::is_same_v<T, Assign>) {
          os << pad << n.var << " = ";
          print_arith(os, n.value, 0);
        } else if constexpr (std::is_same_v<T, ArrAssign>) {
          os << pad << n.array << '[';
          print_arith(os, n.index, 0);
          os << "] = ";
          print_arith(os, n.value, 0);
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          print_stmt_rec(os, n.first, indent, oracle);
          os << ";\n";
          print_stmt_rec(os, n.second, indent, oracle);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          os << pad << "if ";
          print_bool(os, n.cond, 0);
          os << " then\n";
          print_stmt_rec(os, n.then_branch, indent + 2, oracle);
          os << '\n' << pad << "else\n";
          print_stmt_rec(os, n.else_branch, indent + 2, oracle);
          os << '\n' << pad << "end";
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          os << pad << "while ";
          print_bool(os, n.cond, 0);
          if (oracle) {
            auto it = oracle->find(n.loop_id);
            if (it != oracle->end()) {
              os << ' ';
              print_annotations(os, it->second);
            }
          }
          os << " do\n";
          print_stmt_rec(os, n.body, indent + 2, oracle);
          os << '\n' << pad << "end";
        } else {
          static_assert(std::is_same_v<T, ForStmt>);
          os << pad << "for " << n.binder << " = " << n.lower << " to ";
          print_arith(os, n.upper, 0);
          if (oracle) {
            auto it = oracle->find(n.loop_id);
            if (it != oracle->end()) {
              os << ' ';
              print_annotations(os, it->second);
            }
          }
          os << " do\n";
          print_stmt_rec(os, n.body, indent + 2, oracle);
          os << '\n' << pad << "end";
        }
      },
      s->node);
}

}  // namespace

std::string pretty(const ArithPtr& e) {
  std::ostringstream os;
  print_arith(os, e, 0);
  return os.str();
}

std::string pretty(const BoolPtr& e) {
  std::ostringstream os;
  print_bool(os, e, 0);
  return os.str();
}

std::string pretty(const AssertPtr& a) {
  std::ostringstream os;
  print_assert(os, a, 0);
  return os.str();
}

std::string pretty(const StmtPtr& s) {
  std::ostringstream os;
  print_stmt_rec(os, s, 0, nullptr);
  return os.str();
}

std::string pretty_print(const AnnotatedProgram& p) {
  std::ostringstream os;
  os << "#mode: " << to_string(p.mode) << '\n';
  os << "{ ";
  print_assert(os, p.precondition, 0);
  os << " }\n";
  print_stmt_rec(os, p.body, 0, &p.oracle);
  os << "\n{ ";
  print_assert(os, p.postcondition, 0);
  os << " | ";
  print_arith(os, p.cost_bound, 0);
  os << " }\n";
  return os.str();
}

}  // namespace timebound

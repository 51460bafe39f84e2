#include "wazkit/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <algorithm>

namespace wazkit {

namespace detail {

enum class Op : std::uint8_t {
  Const, Var,
  Neg, Add, Sub, Mul, Div, Pow,
  Sin, Cos, Tan, Exp, Log, Sqrt, Abs,
  Min, Max, Clamp,
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  std::size_t slot = 0;
  std::uint32_t offset = 0;
  std::vector<Node> kids;
};

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FuncInfo {
  const char* name;
  Op op;
  int arity;
};

constexpr std::array<FuncInfo, 10> kFuncs = {{
    {"sin", Op::Sin, 1}, {"cos", Op::Cos, 1}, {"tan", Op::Tan, 1},
    {"exp", Op::Exp, 1}, {"log", Op::Log, 1}, {"sqrt", Op::Sqrt, 1},
    {"abs", Op::Abs, 1}, {"min", Op::Min, 2}, {"max", Op::Max, 2},
    {"clamp", Op::Clamp, 3},
}};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncs)
    if (name == f.name) return &f;
  return nullptr;
}

bool is_reserved(std::string_view name) { return name == "pi" || find_func(name) != nullptr; }

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok : std::uint8_t { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = Tok::Plus; ++pos_; return;
      case '-': tok_.kind = Tok::Minus; ++pos_; return;
      case '*': tok_.kind = Tok::Star; ++pos_; return;
      case '/': tok_.kind = Tok::Slash; ++pos_; return;
      case '^': tok_.kind = Tok::Caret; ++pos_; return;
      case '(': tok_.kind = Tok::LParen; ++pos_; return;
      case ')': tok_.kind = Tok::RParen; ++pos_; return;
      case ',': tok_.kind = Tok::Comma; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (ident_start(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && ident_char(src_[end])) ++end;
      tok_.kind = Tok::Ident;
      tok_.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void lex_number() {
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) throw ParseError("malformed number", pos_);
    tok_.kind = Tok::Number;
    tok_.number = v;
    tok_.text = src_.substr(pos_, static_cast<std::size_t>(ptr - begin));
    pos_ = static_cast<std::size_t>(ptr - src_.data());
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Parser (recursive descent; ^ > unary - > * / > + -)
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view src, const SymbolTable& symbols) : lex_(src), symbols_(symbols) {}

  Node parse() {
    Node n = parse_sum();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) throw ParseError("unexpected trailing input", t.offset);
    return n;
  }

 private:
  Node parse_sum() {
    Node left = parse_product();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind != Tok::Plus && t.kind != Tok::Minus) return left;
      const Token op = lex_.take();
      Node right = parse_product();
      left = binary(op.kind == Tok::Plus ? Op::Add : Op::Sub, op.offset, std::move(left), std::move(right));
    }
  }

  Node parse_product() {
    Node left = parse_unary();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind != Tok::Star && t.kind != Tok::Slash) return left;
      const Token op = lex_.take();
      Node right = parse_unary();
      left = binary(op.kind == Tok::Star ? Op::Mul : Op::Div, op.offset, std::move(left), std::move(right));
    }
  }

  Node parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Minus) {
      const Token op = lex_.take();
      Node n;
      n.op = Op::Neg;
      n.offset = static_cast<std::uint32_t>(op.offset);
      n.kids.push_back(parse_unary());
      return n;
    }
    if (t.kind == Tok::Plus) {
      lex_.take();
      return parse_unary();
    }
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_atom();
    const Token& t = lex_.peek();
    if (t.kind != Tok::Caret) return base;
    const Token op = lex_.take();
    // Right-associative; the exponent may carry its own unary sign.
    Node expo = parse_unary();
    return binary(Op::Pow, op.offset, std::move(base), std::move(expo));
  }

  Node parse_atom() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Tok::Number: {
        Node n;
        n.op = Op::Const;
        n.value = t.number;
        n.offset = static_cast<std::uint32_t>(t.offset);
        return n;
      }
      case Tok::LParen: {
        Node inner = parse_sum();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::Ident:
        return parse_ident(t);
      case Tok::End:
        throw ParseError("unexpected end of input, expected an operand", t.offset);
      default:
        throw ParseError("expected an operand", t.offset);
    }
  }

  Node parse_ident(const Token& t) {
    if (lex_.peek().kind == Tok::LParen) {
      const FuncInfo* f = find_func(t.text);
      if (f == nullptr) throw ParseError("unknown function '" + std::string(t.text) + "'", t.offset);
      lex_.take();  // '('
      Node n;
      n.op = f->op;
      n.offset = static_cast<std::uint32_t>(t.offset);
      n.kids.push_back(parse_sum());
      while (lex_.peek().kind == Tok::Comma) {
        lex_.take();
        n.kids.push_back(parse_sum());
      }
      expect(Tok::RParen, "expected ')'");
      if (static_cast<int>(n.kids.size()) != f->arity)
        throw ParseError(std::string(t.text) + " expects " + std::to_string(f->arity) + " argument(s), got " +
                             std::to_string(n.kids.size()),
                         t.offset);
      return n;
    }
    if (t.text == "pi") {
      Node n;
      n.op = Op::Const;
      n.value = kPi;
      n.offset = static_cast<std::uint32_t>(t.offset);
      return n;
    }
    const auto slot = symbols_.find(t.text);
    if (!slot) throw ParseError("undeclared identifier '" + std::string(t.text) + "'", t.offset);
    Node n;
    n.op = Op::Var;
    n.slot = *slot;
    n.offset = static_cast<std::uint32_t>(t.offset);
    return n;
  }

  void expect(Tok kind, const char* msg) {
    const Token& t = lex_.peek();
    if (t.kind != kind) throw ParseError(msg, t.offset);
    lex_.take();
  }

  static Node binary(Op op, std::size_t offset, Node left, Node right) {
    Node n;
    n.op = op;
    n.offset = static_cast<std::uint32_t>(offset);
    n.kids.push_back(std::move(left));
    n.kids.push_back(std::move(right));
    return n;
  }

  Lexer lex_;
  const SymbolTable& symbols_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

bool integral_exponent(double e) { return e == std::floor(e) && std::abs(e) < 1e15; }

double eval_node(const Node& n, std::span<const double> v) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return v[n.slot];
    case Op::Neg: return -eval_node(n.kids[0], v);
    case Op::Add: return eval_node(n.kids[0], v) + eval_node(n.kids[1], v);
    case Op::Sub: return eval_node(n.kids[0], v) - eval_node(n.kids[1], v);
    case Op::Mul: return eval_node(n.kids[0], v) * eval_node(n.kids[1], v);
    case Op::Div: {
      const double num = eval_node(n.kids[0], v);
      const double den = eval_node(n.kids[1], v);
      if (den == 0.0) throw EvalError("division by zero", n.offset);
      return num / den;
    }
    case Op::Pow: {
      const double b = eval_node(n.kids[0], v);
      const double e = eval_node(n.kids[1], v);
      if (integral_exponent(e)) {
        if (b == 0.0 && e < 0.0) throw EvalError("zero base with negative exponent", n.offset);
        return std::pow(b, e);
      }
      if (b <= 0.0) throw EvalError("pow with non-integer exponent requires a positive base", n.offset);
      return std::pow(b, e);
    }
    case Op::Sin: return std::sin(eval_node(n.kids[0], v));
    case Op::Cos: return std::cos(eval_node(n.kids[0], v));
    case Op::Tan: return std::tan(eval_node(n.kids[0], v));
    case Op::Exp: return std::exp(eval_node(n.kids[0], v));
    case Op::Log: {
      const double a = eval_node(n.kids[0], v);
      if (a <= 0.0) throw EvalError("log of a non-positive value", n.offset);
      return std::log(a);
    }
    case Op::Sqrt: {
      const double a = eval_node(n.kids[0], v);
      if (a < 0.0) throw EvalError("sqrt of a negative value", n.offset);
      return std::sqrt(a);
    }
    case Op::Abs: return std::abs(eval_node(n.kids[0], v));
    case Op::Min: return std::min(eval_node(n.kids[0], v), eval_node(n.kids[1], v));
    case Op::Max: return std::max(eval_node(n.kids[0], v), eval_node(n.kids[1], v));
    case Op::Clamp: {
      const double x = eval_node(n.kids[0], v);
      const double lo = eval_node(n.kids[1], v);
      const double hi = eval_node(n.kids[2], v);
      return std::min(std::max(x, lo), hi);
    }
  }
  throw EvalError("corrupt expression node", n.offset);
}

Jet eval_node_jet(const Node& n, std::span<const Jet> v) {
  try {
    switch (n.op) {
      case Op::Const: return Jet::constant(n.value, v[0].order());
      case Op::Var: return v[n.slot];
      case Op::Neg: return -eval_node_jet(n.kids[0], v);
      case Op::Add: return eval_node_jet(n.kids[0], v) + eval_node_jet(n.kids[1], v);
      case Op::Sub: return eval_node_jet(n.kids[0], v) - eval_node_jet(n.kids[1], v);
      case Op::Mul: return eval_node_jet(n.kids[0], v) * eval_node_jet(n.kids[1], v);
      case Op::Div: return eval_node_jet(n.kids[0], v) / eval_node_jet(n.kids[1], v);
      case Op::Pow: return jet_pow(eval_node_jet(n.kids[0], v), eval_node_jet(n.kids[1], v));
      case Op::Sin: return jet_sin(eval_node_jet(n.kids[0], v));
      case Op::Cos: return jet_cos(eval_node_jet(n.kids[0], v));
      case Op::Tan: return jet_tan(eval_node_jet(n.kids[0], v));
      case Op::Exp: return jet_exp(eval_node_jet(n.kids[0], v));
      case Op::Log: return jet_log(eval_node_jet(n.kids[0], v));
      case Op::Sqrt: return jet_sqrt(eval_node_jet(n.kids[0], v));
      case Op::Abs: return jet_abs(eval_node_jet(n.kids[0], v));
      case Op::Min: return jet_min(eval_node_jet(n.kids[0], v), eval_node_jet(n.kids[1], v));
      case Op::Max: return jet_max(eval_node_jet(n.kids[0], v), eval_node_jet(n.kids[1], v));
      case Op::Clamp:
        return jet_clamp(eval_node_jet(n.kids[0], v), eval_node_jet(n.kids[1], v), eval_node_jet(n.kids[2], v));
    }
  } catch (const std::domain_error& e) {
    throw EvalError(e.what(), n.offset);
  }
  throw EvalError("corrupt expression node", n.offset);
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_node(const Node& n, const SymbolTable& symbols, std::string& out);

void print_child(const Node& child, const SymbolTable& symbols, int min_prec, std::string& out) {
  const bool parens = precedence(child.op) < min_prec;
  if (parens) out += '(';
  print_node(child, symbols, out);
  if (parens) out += ')';
}

void print_node(const Node& n, const SymbolTable& symbols, std::string& out) {
  switch (n.op) {
    case Op::Const: out += format_number(n.value); return;
    case Op::Var: out += symbols.name(n.slot); return;
    case Op::Neg:
      out += '-';
      print_child(n.kids[0], symbols, 3, out);
      return;
    case Op::Add:
      print_child(n.kids[0], symbols, 1, out);
      out += " + ";
      print_child(n.kids[1], symbols, 1, out);
      return;
    case Op::Sub:
      print_child(n.kids[0], symbols, 1, out);
      out += " - ";
      print_child(n.kids[1], symbols, 2, out);
      return;
    case Op::Mul:
      print_child(n.kids[0], symbols, 2, out);
      out += '*';
      print_child(n.kids[1], symbols, 2, out);
      return;
    case Op::Div:
      print_child(n.kids[0], symbols, 2, out);
      out += '/';
      print_child(n.kids[1], symbols, 3, out);
      return;
    case Op::Pow:
      print_child(n.kids[0], symbols, 5, out);
      out += '^';
      print_child(n.kids[1], symbols, 4, out);
      return;
    default: {
      for (const auto& f : kFuncs) {
        if (f.op == n.op) {
          out += f.name;
          out += '(';
          for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (i) out += ", ";
            print_node(n.kids[i], symbols, out);
          }
          out += ')';
          return;
        }
      }
      out += "<?>";
    }
  }
}

void collect_slots(const Node& n, std::vector<std::size_t>& slots) {
  if (n.op == Op::Var) slots.push_back(n.slot);
  for (const Node& k : n.kids) collect_slots(k, slots);
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// SymbolTable
// ---------------------------------------------------------------------------

SymbolTable::SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
  for (const std::string& n : names_) {
    if (n.empty() || !detail::ident_start(n[0]))
      throw SpecError("invalid symbol name '" + n + "'");
    for (char c : n)
      if (!detail::ident_char(c)) throw SpecError("invalid symbol name '" + n + "'");
    if (detail::is_reserved(n)) throw SpecError("symbol name '" + n + "' is reserved");
  }
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw SpecError("duplicate symbol name '" + names_[i] + "'");
}

SymbolTable SymbolTable::state_time_params(std::size_t dim, const std::map<std::string, double>& params) {
  std::vector<std::string> names;
  names.reserve(dim + 1 + params.size());
  for (std::size_t i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("t");
  for (const auto& [k, v] : params) names.push_back(k);
  return SymbolTable(std::move(names));
}

std::optional<std::size_t> SymbolTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

Expr Expr::parse(std::string_view source, const SymbolTable& symbols) {
  if (source.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError("empty expression", 0);
  detail::Parser parser(source, symbols);
  Expr e;
  e.root_ = std::make_shared<const detail::Node>(parser.parse());
  e.symbols_ = std::make_shared<const SymbolTable>(symbols);
  return e;
}

double Expr::eval(std::span<const double> values) const {
  if (!root_) throw SpecError("evaluating an empty expression");
  if (values.size() < symbols_->size()) throw ArgumentError("expression value vector too short");
  return detail::eval_node(*root_, values);
}

double Expr::evaluate(const std::map<std::string, double>& env) const {
  if (!root_) throw SpecError("evaluating an empty expression");
  std::vector<double> values(symbols_->size(), 0.0);
  for (std::size_t i = 0; i < symbols_->size(); ++i) {
    auto it = env.find(symbols_->name(i));
    if (it == env.end()) throw SpecError("unbound symbol '" + symbols_->name(i) + "'");
    values[i] = it->second;
  }
  return eval(values);
}

Jet Expr::eval_jet(std::span<const Jet> values) const {
  if (!root_) throw SpecError("evaluating an empty expression");
  if (values.size() < symbols_->size()) throw ArgumentError("expression jet vector too short");
  return detail::eval_node_jet(*root_, values);
}

std::string Expr::print() const {
  if (!root_) return "";
  std::string out;
  detail::print_node(*root_, *symbols_, out);
  return out;
}

std::vector<std::size_t> Expr::free_slots() const {
  std::vector<std::size_t> slots;
  if (root_) detail::collect_slots(*root_, slots);
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

}  // namespace wazkit

#include "corostab/expression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "corostab/errors.hpp"
#include "corostab/random.hpp"

namespace corostab {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Slot used for the bound name `x` inside sum(...) before expansion.
constexpr int kBoundSlot = 4;

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      Token t{Token::Kind::Number, std::string(src.substr(start, i - start)), start};
      const auto res = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), t.value);
      if (res.ec != std::errc() || res.ptr != t.lexeme.data() + t.lexeme.size()) {
        throw LexError("malformed number '" + t.lexeme + "'", start);
      }
      out.push_back(std::move(t));
    } else if (is_ident_start(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      out.push_back({Token::Kind::Identifier, std::string(src.substr(start, i - start)), start});
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({Token::Kind::Operator, std::string(1, c), start});
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::LeftParen, "(", start});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::Kind::RightParen, ")", start});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::Kind::Comma, ",", start});
      ++i;
    } else {
      throw LexError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Token::Kind::End, "", src.size()});
  return out;
}

// ---------------------------------------------------------------------------
// Parser (Pratt / top-down operator precedence)

namespace {

using Op = ExprAst::Op;
using Node = ExprAst::Node;

constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kPrefix = 30;
constexpr int kPower = 40;

const char* kOperandSet = "number, name, '(' or '-'";

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  ExprAst run() {
    if (tokens_.empty() || tokens_.back().kind != Token::Kind::End) {
      throw ParseError("token stream is not terminated", 0, "");
    }
    if (peek().kind == Token::Kind::End) throw ParseError("empty expression", peek().position, kOperandSet);
    const int root = expression(0);
    if (peek().kind != Token::Kind::End) {
      throw ParseError("unexpected '" + peek().lexeme + "'", peek().position, "operator or end of input");
    }
    return compact(root);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  int add(Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }
  int binary(Op op, int l, int r) { return add(Node{op, 0.0, -1, l, r}); }

  static int left_power(const Token& t) {
    if (t.kind != Token::Kind::Operator) return 0;
    switch (t.lexeme[0]) {
      case '+':
      case '-':
        return kAdditive;
      case '*':
      case '/':
        return kMultiplicative;
      case '^':
        return kPower;
      default:
        return 0;
    }
  }

  int expression(int rbp) {
    int left = prefix(next());
    while (rbp < left_power(peek())) left = infix(next(), left);
    return left;
  }

  int prefix(const Token& t) {
    switch (t.kind) {
      case Token::Kind::Number:
        return add(Node{Op::Constant, t.value});
      case Token::Kind::Identifier:
        return name(t);
      case Token::Kind::LeftParen: {
        const int inner = expression(0);
        expect_close(t);
        return inner;
      }
      case Token::Kind::Operator:
        if (t.lexeme == "-") return add(Node{Op::Neg, 0.0, -1, expression(kPrefix)});
        if (t.lexeme == "+") return expression(kPrefix);
        break;
      case Token::Kind::End:
        throw ParseError("unexpected end of input", t.position, kOperandSet);
      default:
        break;
    }
    throw ParseError("unexpected '" + t.lexeme + "'", t.position, kOperandSet);
  }

  int infix(const Token& t, int left) {
    switch (t.lexeme[0]) {
      case '+':
        return binary(Op::Add, left, expression(kAdditive));
      case '-':
        return binary(Op::Sub, left, expression(kAdditive));
      case '*':
        return binary(Op::Mul, left, expression(kMultiplicative));
      case '/':
        return binary(Op::Div, left, expression(kMultiplicative));
      case '^':
        // rbp one below the left power: right-associative. x^-2 still parses
        // because the operand may start with a prefix minus.
        return binary(Op::Pow, left, expression(kPower - 1));
      default:
        throw ParseError("unexpected '" + t.lexeme + "'", t.position, "operator");
    }
  }

  void expect_close(const Token& open) {
    const Token& t = next();
    if (t.kind == Token::Kind::RightParen) return;
    if (t.kind == Token::Kind::End) {
      throw ParseError("unexpected end of input, unclosed '(' from position " + std::to_string(open.position),
                       t.position, "')'");
    }
    throw ParseError("unexpected '" + t.lexeme + "'", t.position, "')' or operator");
  }

  int name(const Token& t) {
    static const std::map<std::string, Op, std::less<>> functions{
        {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs}};
    const std::string& id = t.lexeme;
    const bool call = peek().kind == Token::Kind::LeftParen;
    if (call) {
      if (const auto it = functions.find(id); it != functions.end()) {
        const Token& open = next();
        const int arg = expression(0);
        expect_close(open);
        return add(Node{it->second, 0.0, -1, arg});
      }
      if (id == "sum") return sum(next());
      throw ParseError("unknown function '" + id + "'", t.position, "exp, log, sqrt, abs or sum");
    }
    if (functions.contains(id) || id == "sum") {
      throw ParseError("function '" + id + "' needs an argument", peek().position, "'('");
    }
    if (id == "x1" || id == "x2" || id == "x3") return add(Node{Op::Variable, 0.0, id[1] - '1'});
    if (id == "s") return add(Node{Op::Variable, 0.0, 3});
    if (id == "x") {
      if (!in_sum_) throw ParseError("'x' is only defined inside sum(...)", t.position, "x1, x2, x3 or s");
      return add(Node{Op::Variable, 0.0, kBoundSlot});
    }
    return add(Node{Op::Parameter, 0.0, parameter_slot(id)});
  }

  int sum(const Token& open) {
    if (in_sum_) throw ParseError("nested sum(...) is not supported", open.position, "");
    in_sum_ = true;
    const int body = expression(0);
    in_sum_ = false;
    expect_close(open);
    int acc = substitute(body, 0);
    for (int k = 1; k < 3; ++k) acc = binary(Op::Add, acc, substitute(body, k));
    return acc;
  }

  // Copies the subtree at `index`, replacing the bound name with x{k+1}.
  int substitute(int index, int k) {
    Node n = nodes_[index];
    if (n.op == Op::Variable && n.slot == kBoundSlot) n.slot = k;
    if (n.lhs >= 0) n.lhs = substitute(n.lhs, k);
    if (n.rhs >= 0) n.rhs = substitute(n.rhs, k);
    return add(n);
  }

  int parameter_slot(const std::string& id) {
    const auto it = std::find(names_.begin(), names_.end(), id);
    if (it != names_.end()) return static_cast<int>(it - names_.begin());
    names_.push_back(id);
    return static_cast<int>(names_.size()) - 1;
  }

  // Keeps only nodes reachable from the root, children before parents.
  ExprAst compact(int root) {
    std::vector<Node> out;
    out.reserve(nodes_.size());
    const std::function<int(int)> copy = [&](int i) {
      Node n = nodes_[i];
      if (n.lhs >= 0) n.lhs = copy(n.lhs);
      if (n.rhs >= 0) n.rhs = copy(n.rhs);
      out.push_back(n);
      return static_cast<int>(out.size()) - 1;
    };
    const int r = copy(root);
    return ExprAst(std::move(out), r, names_);
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::string> names_;
  bool in_sum_ = false;
};

}  // namespace

ExprAst parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ExprAst parse_expression(std::string_view source) { return parse(tokenize(source)); }

// ---------------------------------------------------------------------------
// Evaluation

ExprAst::ExprAst(std::vector<Node> nodes, int root, std::vector<std::string> parameter_names)
    : nodes_(std::move(nodes)), root_(root), parameter_names_(std::move(parameter_names)) {}

double ExprAst::evaluate(const EvalContext& ctx) const { return eval_node(root_, ctx); }

double ExprAst::eval_node(int index, const EvalContext& ctx) const {
  const Node& n = nodes_[index];
  switch (n.op) {
    case Op::Constant:
      return n.value;
    case Op::Variable:
      return n.slot == 3 ? ctx.x(0) + ctx.x(1) + ctx.x(2) : ctx.x(n.slot);
    case Op::Parameter: {
      const std::string& id = parameter_names_[n.slot];
      if (ctx.parameters != nullptr) {
        if (const auto it = ctx.parameters->find(id); it != ctx.parameters->end()) return it->second;
      }
      throw EvalError("unbound parameter '" + id + "'");
    }
    case Op::Neg:
      return -eval_node(n.lhs, ctx);
    case Op::Exp:
      return std::exp(eval_node(n.lhs, ctx));
    case Op::Log: {
      const double a = eval_node(n.lhs, ctx);
      if (!(a > 0.0)) throw EvalError("log of non-positive argument " + std::to_string(a));
      return std::log(a);
    }
    case Op::Sqrt: {
      const double a = eval_node(n.lhs, ctx);
      if (a < 0.0) throw EvalError("sqrt of negative argument " + std::to_string(a));
      return std::sqrt(a);
    }
    case Op::Abs:
      return std::abs(eval_node(n.lhs, ctx));
    case Op::Add:
      return eval_node(n.lhs, ctx) + eval_node(n.rhs, ctx);
    case Op::Sub:
      return eval_node(n.lhs, ctx) - eval_node(n.rhs, ctx);
    case Op::Mul:
      return eval_node(n.lhs, ctx) * eval_node(n.rhs, ctx);
    case Op::Div:
      return eval_node(n.lhs, ctx) / eval_node(n.rhs, ctx);
    case Op::Pow: {
      const double base = eval_node(n.lhs, ctx);
      const Node& ex = nodes_[n.rhs];
      if (ex.op == Op::Constant && ex.value >= 0.0 && ex.value <= 4.0 && ex.value == std::floor(ex.value)) {
        switch (static_cast<int>(ex.value)) {
          case 0:
            return 1.0;
          case 1:
            return base;
          case 2:
            return base * base;
          case 3:
            return base * base * base;
          default: {
            const double sq = base * base;
            return sq * sq;
          }
        }
      }
      const double e = eval_node(n.rhs, ctx);
      const double r = std::pow(base, e);
      if (std::isnan(r) && !std::isnan(base) && !std::isnan(e)) {
        throw EvalError("pow(" + std::to_string(base) + ", " + std::to_string(e) + ") is undefined");
      }
      return r;
    }
  }
  return 0.0;
}

ExprAst ExprAst::bind(const ParameterMap& parameters) const {
  std::vector<Node> nodes = nodes_;
  for (Node& n : nodes) {
    if (n.op != Op::Parameter) continue;
    const std::string& id = parameter_names_[n.slot];
    const auto it = parameters.find(id);
    if (it == parameters.end()) throw EvalError("unbound parameter '" + id + "'");
    n = Node{Op::Constant, it->second};
  }
  return ExprAst(std::move(nodes), root_, {});
}

void ExprAst::print_node(int index, std::string& out) const {
  const Node& n = nodes_[index];
  auto unary = [&](const char* fn) {
    out += fn;
    out += '(';
    print_node(n.lhs, out);
    out += ')';
  };
  auto binop = [&](const char* sym) {
    out += '(';
    print_node(n.lhs, out);
    out += sym;
    print_node(n.rhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      break;
    }
    case Op::Variable:
      out += n.slot == 3 ? std::string("s") : "x" + std::to_string(n.slot + 1);
      break;
    case Op::Parameter:
      out += parameter_names_[n.slot];
      break;
    case Op::Neg:
      out += "(-";
      print_node(n.lhs, out);
      out += ')';
      break;
    case Op::Exp:
      unary("exp");
      break;
    case Op::Log:
      unary("log");
      break;
    case Op::Sqrt:
      unary("sqrt");
      break;
    case Op::Abs:
      unary("abs");
      break;
    case Op::Add:
      binop(" + ");
      break;
    case Op::Sub:
      binop(" - ");
      break;
    case Op::Mul:
      binop(" * ");
      break;
    case Op::Div:
      binop(" / ");
      break;
    case Op::Pow:
      binop(" ^ ");
      break;
  }
}

std::string ExprAst::to_string() const {
  std::string out;
  print_node(root_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Permutation equivariance

namespace {

constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace

EquivarianceVerdict check_permutation_equivariance(const VectorFunction& f, int samples, std::uint64_t seed,
                                                   double box, double tolerance) {
  Rng rng(seed);
  EquivarianceVerdict verdict;
  for (int n = 0; n < samples; ++n) {
    const Vector3 x = rng.uniform_vector(-box, box);
    const Vector3 fx = f(x);
    for (const auto& p : kPermutations) {
      Vector3 y;
      for (int k = 0; k < 3; ++k) y(p[k]) = x(k);
      const Vector3 fy = f(y);
      for (int i = 0; i < 3; ++i) {
        const double scale = std::max(1.0, std::abs(fx(i)));
        if (!(std::abs(fy(p[i]) - fx(i)) <= tolerance * scale)) {
          verdict.equivariant = false;
          verdict.witness = EquivarianceVerdict::Witness{x, p, i, fx(i), fy(p[i])};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

EquivarianceVerdict check_permutation_equivariance(const std::array<ExprAst, 3>& components,
                                                   const ParameterMap& parameters, int samples,
                                                   std::uint64_t seed) {
  const VectorFunction f = [&](const Vector3& x) {
    const EvalContext ctx{x, &parameters};
    return Vector3(components[0].evaluate(ctx), components[1].evaluate(ctx), components[2].evaluate(ctx));
  };
  return check_permutation_equivariance(f, samples, seed);
}

std::string expand_component_template(std::string_view templ, int component) {
  std::string out;
  out.reserve(templ.size());
  const char digit = static_cast<char>('0' + component);
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ.substr(i, 3) == "{i}") {
      out += digit;
      i += 2;
    } else {
      out += templ[i];
    }
  }
  return out;
}

}  // namespace corostab

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fomlab/circuit.hpp"
#include "fomlab/error.hpp"

namespace fomlab {

namespace {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= src_.size()) return tok;
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      tok.type = Tok::Ident;
      tok.text = std::string(src_.substr(start, pos_ - start));
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
        advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      }
      tok.type = Tok::Number;
      tok.text = std::string(src_.substr(start, pos_ - start));
    } else if (c == '"') {
      advance();
      std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != '"') advance();
      if (pos_ >= src_.size()) fail(tok, "unterminated string");
      tok.type = Tok::String;
      tok.text = std::string(src_.substr(start, pos_ - start));
      advance();
    } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      tok.type = Tok::Arrow;
      tok.text = "->";
    } else {
      advance();
      tok.type = Tok::Symbol;
      tok.text = std::string(1, c);
    }
    return tok;
  }

  [[noreturn]] static void fail(const Token& at, const std::string& what) {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(at.line) + ", column " +
                                       std::to_string(at.column) + ": " + what);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct Register {
  std::string name;
  std::size_t size = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

  Circuit parse() {
    std::vector<GateOp> ops;
    while (tok_.type != Tok::End) statement(ops);
    if (!qreg_) Lexer::fail(tok_, "missing qreg declaration");
    return Circuit(qreg_->size, std::move(ops));
  }

 private:
  void statement(std::vector<GateOp>& ops) {
    if (tok_.type != Tok::Ident) Lexer::fail(tok_, "expected statement, found '" + tok_.text + "'");
    const Token head = tok_;
    if (head.text == "OPENQASM") {
      take();
      if (tok_.type != Tok::Number) Lexer::fail(tok_, "expected version number");
      if (tok_.text != "2.0" && tok_.text != "2") {
        Lexer::fail(tok_, "only OpenQASM 2.0 is supported");
      }
      take();
      expect(";");
    } else if (head.text == "include") {
      take();
      if (tok_.type != Tok::String) Lexer::fail(tok_, "expected include file name");
      take();
      expect(";");
    } else if (head.text == "qreg" || head.text == "creg") {
      declare(head);
    } else if (head.text == "measure") {
      measure(ops);
    } else {
      gate(ops);
    }
  }

  void declare(const Token& head) {
    take();
    Register reg;
    reg.name = ident();
    expect("[");
    reg.size = index();
    expect("]");
    expect(";");
    auto& slot = head.text == "qreg" ? qreg_ : creg_;
    if (slot) Lexer::fail(head, "only one " + head.text + " is supported");
    if (reg.size == 0) Lexer::fail(head, head.text + " must be non-empty");
    slot = reg;
  }

  // Returns every qubit named by `q[i]` or `q` (whole-register broadcast).
  std::vector<Qubit> qubit_arg(const std::optional<Register>& reg, const char* what) {
    const Token at = tok_;
    const std::string name = ident();
    if (!reg || reg->name != name) Lexer::fail(at, std::string("unknown ") + what + " '" + name + "'");
    if (!peek("[")) {
      std::vector<Qubit> all(reg->size);
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Qubit>(i);
      return all;
    }
    expect("[");
    const Token idx_tok = tok_;
    const std::size_t idx = index();
    expect("]");
    if (idx >= reg->size) {
      throw Error(ErrorKind::QubitOutOfRange,
                  "line " + std::to_string(idx_tok.line) + ", column " +
                      std::to_string(idx_tok.column) + ": index " + std::to_string(idx) +
                      " out of range for register " + name + "[" + std::to_string(reg->size) + "]");
    }
    return {static_cast<Qubit>(idx)};
  }

  void measure(std::vector<GateOp>& ops) {
    const Token at = tok_;
    take();
    const auto qs = qubit_arg(qreg_, "quantum register");
    if (tok_.type != Tok::Arrow) Lexer::fail(tok_, "expected '->'");
    take();
    const auto cs = qubit_arg(creg_, "classical register");
    expect(";");
    if (qs.size() != cs.size()) Lexer::fail(at, "measure operand sizes differ");
    for (Qubit q : qs) ops.push_back(GateOp::one(GateKind::Measure, q));
  }

  void gate(std::vector<GateOp>& ops) {
    const Token at = tok_;
    const std::string name = ident();
    const auto kind = gate_from_name(name);
    if (!kind || *kind == GateKind::Measure) {
      throw Error(ErrorKind::UnsupportedGate, "line " + std::to_string(at.line) + ", column " +
                                                  std::to_string(at.column) +
                                                  ": unsupported gate '" + name + "'");
    }
    std::optional<double> param;
    if (peek("(")) {
      take();
      param = expression();
      expect(")");
    }
    if (is_rotation(*kind) != param.has_value()) {
      Lexer::fail(at, is_rotation(*kind) ? name + " requires an angle" : name + " takes no angle");
    }
    std::vector<std::vector<Qubit>> args;
    args.push_back(qubit_arg(qreg_, "quantum register"));
    while (peek(",")) {
      take();
      args.push_back(qubit_arg(qreg_, "quantum register"));
    }
    expect(";");
    if (args.size() != arity(*kind)) {
      Lexer::fail(at, name + " expects " + std::to_string(arity(*kind)) + " operand(s)");
    }
    if (arity(*kind) == 1) {
      for (Qubit q : args[0]) ops.push_back(GateOp::one(*kind, q, param));
      return;
    }
    if (args[0].size() != 1 || args[1].size() != 1) {
      Lexer::fail(at, "register broadcast is not supported for two-qubit gates");
    }
    ops.push_back(GateOp::two(*kind, args[0][0], args[1][0]));
  }

  // expression := term (('+'|'-') term)*
  double expression() {
    double value = term();
    while (peek("+") || peek("-")) {
      const bool plus = tok_.text == "+";
      take();
      value = plus ? value + term() : value - term();
    }
    return value;
  }

  double term() {
    double value = unary();
    while (peek("*") || peek("/")) {
      const bool times = tok_.text == "*";
      take();
      value = times ? value * unary() : value / unary();
    }
    return value;
  }

  double unary() {
    if (peek("-")) {
      take();
      return -unary();
    }
    if (peek("+")) {
      take();
      return unary();
    }
    return primary();
  }

  double primary() {
    if (peek("(")) {
      take();
      const double v = expression();
      expect(")");
      return v;
    }
    if (tok_.type == Tok::Number) {
      double v = 0.0;
      const auto& s = tok_.text;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) Lexer::fail(tok_, "bad number '" + s + "'");
      take();
      return v;
    }
    if (tok_.type == Tok::Ident && tok_.text == "pi") {
      take();
      return std::numbers::pi;
    }
    Lexer::fail(tok_, "expected expression, found '" + tok_.text + "'");
  }

  std::string ident() {
    if (tok_.type != Tok::Ident) Lexer::fail(tok_, "expected identifier, found '" + tok_.text + "'");
    std::string s = tok_.text;
    take();
    return s;
  }

  std::size_t index() {
    if (tok_.type != Tok::Number || tok_.text.find_first_not_of("0123456789") != std::string::npos) {
      Lexer::fail(tok_, "expected integer index");
    }
    std::size_t v = 0;
    const auto& s = tok_.text;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc()) Lexer::fail(tok_, "index too large");
    take();
    return v;
  }

  bool peek(std::string_view sym) const { return tok_.type == Tok::Symbol && tok_.text == sym; }

  void expect(std::string_view sym) {
    if (!peek(sym)) {
      Lexer::fail(tok_, "expected '" + std::string(sym) + "', found '" +
                            (tok_.type == Tok::End ? std::string("end of input") : tok_.text) + "'");
    }
    take();
  }

  void take() { tok_ = lexer_.next(); }

  Lexer lexer_;
  Token tok_;
  std::optional<Register> qreg_;
  std::optional<Register> creg_;
};

}  // namespace

Circuit parse_qasm(std::string_view text) { return Parser(text).parse(); }

Circuit load_qasm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_qasm(buffer.str());
}

std::string emit_qasm(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out << "qreg q[" << circuit.num_qubits() << "];\n";
  if (circuit.measured_count() > 0) out << "creg c[" << circuit.num_qubits() << "];\n";
  char angle[64];
  for (const auto& op : circuit.ops()) {
    if (op.is_measure()) {
      out << "measure q[" << op.targets[0] << "] -> c[" << op.targets[0] << "];\n";
      continue;
    }
    out << gate_name(op.kind);
    if (op.param) {
      std::snprintf(angle, sizeof angle, "%.17g", *op.param);
      out << '(' << angle << ')';
    }
    out << " q[" << op.targets[0] << ']';
    if (op.is_two_qubit()) out << ",q[" << op.targets[1] << ']';
    out << ";\n";
  }
  return out.str();
}

}  // namespace fomlab

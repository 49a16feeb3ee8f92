#include "enigma/tptp.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "enigma/error.hpp"

namespace enigma {
namespace {

class Parser {
 public:
  Parser(std::string_view text, Signature& sig, std::string_view source)
      : text_(text), sig_(sig), source_(source) {}

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  void expect(char ch) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ch) {
      fail(std::string("expected '") + ch + "'");
    }
    ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  // Lower-case word, number, $word or 'quoted'.
  std::string atomic_word() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char ch = text_[pos_];
    if (ch == '\'') return quoted();
    if (std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) ||
        ch == '$') {
      std::size_t start = pos_++;
      while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
      return std::string(text_.substr(start, pos_ - start));
    }
    fail("expected a name");
  }

  bool peek_variable() {
    skip_ws();
    return pos_ < text_.size() && std::isupper(static_cast<unsigned char>(text_[pos_]));
  }

  std::string variable_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // `(lit | lit ...)` or bare disjunction; returns literals with clause-local variables.
  std::vector<Literal> disjunction() {
    vars_.clear();
    std::vector<Literal> lits;
    bool parens = accept('(');
    do {
      literal(lits);
    } while (accept('|'));
    if (parens) expect(')');
    normalize_variables(lits);
    return lits;
  }

  [[noreturn]] void fail(const std::string& message, ErrorCode code = ErrorCode::ParseError) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(code, std::string(source_) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                          message);
  }

 private:
  static bool is_word_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else if (ch == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        auto end = text_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 2;
      } else {
        break;
      }
    }
  }

  std::string quoted() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated quoted name");
    ++pos_;
    if (out.empty()) fail("empty quoted name");
    return out;
  }

  Term term() {
    if (peek_variable()) {
      std::string name = variable_name();
      auto [it, inserted] = vars_.emplace(name, static_cast<VarId>(vars_.size()));
      return Term::var(it->second);
    }
    std::string name = atomic_word();
    std::vector<Term> args = arguments();
    SymbolId f = intern(name, static_cast<std::uint32_t>(args.size()), SymbolKind::Function);
    return Term::app(f, std::move(args));
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (accept('(')) {
      do {
        args.push_back(term());
      } while (accept(','));
      expect(')');
    }
    return args;
  }

  SymbolId intern(const std::string& name, std::uint32_t arity, SymbolKind kind) {
    try {
      return sig_.intern(name, arity, kind);
    } catch (const Error& e) {
      fail(e.what(), e.code());
    }
  }

  void literal(std::vector<Literal>& out) {
    bool negated = accept('~');
    if (accept("$false")) {
      if (negated) fail("'~$false' is not supported");
      return;  // contributes nothing to a disjunction
    }
    if (peek_variable()) {
      Term lhs = term();
      equation(out, negated, std::move(lhs));
      return;
    }
    std::string name = atomic_word();
    std::vector<Term> args = arguments();
    auto arity = static_cast<std::uint32_t>(args.size());
    skip_ws();
    if (text_.substr(pos_, 2) == "!=" || text_.substr(pos_, 1) == "=") {
      Term lhs = Term::app(intern(name, arity, SymbolKind::Function), std::move(args));
      equation(out, negated, std::move(lhs));
      return;
    }
    SymbolId p = intern(name, arity, SymbolKind::Predicate);
    out.push_back(Literal{!negated, p, std::move(args)});
  }

  void equation(std::vector<Literal>& out, bool negated, Term lhs) {
    bool positive;
    if (accept("!=")) {
      positive = false;
    } else if (accept('=')) {
      positive = true;
    } else {
      fail("expected '=' or '!=' after a term");
    }
    Term rhs = term();
    out.push_back(equality(negated ? !positive : positive, std::move(lhs), std::move(rhs)));
  }

  Literal equality(bool positive, Term lhs, Term rhs) {
    SymbolId eq = intern(std::string(kEqualityName), 2, SymbolKind::Predicate);
    std::vector<Term> args;
    args.push_back(std::move(lhs));
    args.push_back(std::move(rhs));
    return Literal{positive, eq, std::move(args)};
  }

  std::string_view text_;
  Signature& sig_;
  std::string_view source_;
  std::size_t pos_ = 0;
  std::map<std::string, VarId> vars_;
};

}  // namespace

Problem parse_problem(std::string_view text, std::shared_ptr<Signature> sig, std::string name,
                      std::string_view source) {
  if (!sig) sig = std::make_shared<Signature>();
  Problem problem{std::move(name), sig, {}};
  Parser p(text, *sig, source);
  while (!p.at_end()) {
    if (!p.accept("cnf")) p.fail("expected 'cnf(' (only the CNF subset is supported)");
    p.expect('(');
    std::string clause_name = p.atomic_word();
    p.expect(',');
    std::string role = p.atomic_word();
    if (role != "axiom" && role != "hypothesis" && role != "negated_conjecture" && role != "plain") {
      p.fail("unsupported role '" + role + "'");
    }
    p.expect(',');
    Clause c;
    c.literals = p.disjunction();
    p.expect(')');
    p.expect('.');
    c.id = static_cast<ClauseId>(problem.clauses.size());
    c.age = c.id;
    c.role = ClauseRole::Input;
    c.name = std::move(clause_name);
    c.num_vars = normalize_variables(c.literals);
    problem.clauses.push_back(std::move(c));
  }
  return problem;
}

Problem load_problem(const std::filesystem::path& path, std::shared_ptr<Signature> sig) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open problem file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  return parse_problem(text, std::move(sig), path.stem().string(), path.string());
}

std::vector<Literal> parse_literals(std::string_view text, Signature& sig, std::string_view source) {
  Parser p(text, sig, source);
  std::vector<Literal> lits = p.disjunction();
  if (!p.at_end()) p.fail("trailing input after clause");
  return lits;
}

Clause parse_clause(std::string_view text, Signature& sig) {
  Clause c;
  c.literals = parse_literals(text, sig);
  c.num_vars = normalize_variables(c.literals);
  return c;
}

}  // namespace enigma

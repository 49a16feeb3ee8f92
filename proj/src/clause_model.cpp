#include "enigma/clause_model.hpp"

#include <algorithm>
#include <cctype>

#include "enigma/error.hpp"

namespace enigma {

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Function: return "function";
    case SymbolKind::Predicate: return "predicate";
    case SymbolKind::VariableMarker: return "variable-marker";
    case SymbolKind::SkolemMarker: return "skolem-marker";
    case SymbolKind::PosMarker: return "pos-marker";
    case SymbolKind::NegMarker: return "neg-marker";
  }
  return "function";
}

std::optional<SymbolKind> symbol_kind_from_string(std::string_view text) {
  for (auto kind : {SymbolKind::Function, SymbolKind::Predicate, SymbolKind::VariableMarker,
                    SymbolKind::SkolemMarker, SymbolKind::PosMarker, SymbolKind::NegMarker}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

Signature::Signature() : Signature(std::vector<std::string>{"sko", "esk"}) {}

Signature::Signature(std::vector<std::string> skolem_prefixes)
    : skolem_prefixes_(std::move(skolem_prefixes)) {
  const std::pair<const char*, SymbolKind> markers[] = {
      {"⊛", SymbolKind::VariableMarker},
      {"⊙", SymbolKind::SkolemMarker},
      {"⊕", SymbolKind::PosMarker},
      {"⊖", SymbolKind::NegMarker},
  };
  for (const auto& [name, kind] : markers) {
    auto id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back(Symbol{id, name, 0, kind, false});
    lookup_.emplace(name, id);
  }
}

SymbolId Signature::intern(std::string_view name, std::uint32_t arity, SymbolKind kind) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "cannot intern an empty symbol name");
  if (auto it = lookup_.find(name); it != lookup_.end()) {
    const Symbol& existing = symbols_[it->second];
    if (existing.id < kNumMarkers) {
      throw Error(ErrorCode::KindClash,
                  "symbol '" + std::string(name) + "' is reserved for a marker");
    }
    if (existing.arity != arity) {
      throw Error(ErrorCode::ArityClash, "symbol '" + std::string(name) + "' registered with arity " +
                                             std::to_string(existing.arity) + ", used with arity " +
                                             std::to_string(arity));
    }
    if (existing.kind != kind) {
      throw Error(ErrorCode::KindClash, "symbol '" + std::string(name) + "' registered as " +
                                            to_string(existing.kind) + ", used as " + to_string(kind));
    }
    return existing.id;
  }
  if (frozen_) {
    throw Error(ErrorCode::SignatureFrozen,
                "cannot register '" + std::string(name) + "': signature is frozen");
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{id, std::string(name), arity, kind,
                            kind == SymbolKind::Function && is_skolem(name)});
  lookup_.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> Signature::lookup(std::string_view name) const {
  if (auto it = lookup_.find(name); it != lookup_.end()) return it->second;
  return std::nullopt;
}

bool Signature::is_skolem(std::string_view name) const {
  return std::any_of(skolem_prefixes_.begin(), skolem_prefixes_.end(),
                     [&](const std::string& prefix) { return name.starts_with(prefix); });
}

bool Signature::operator==(const Signature& other) const {
  if (symbols_.size() != other.symbols_.size() || skolem_prefixes_ != other.skolem_prefixes_) {
    return false;
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const Symbol& a = symbols_[i];
    const Symbol& b = other.symbols_[i];
    if (a.name != b.name || a.arity != b.arity || a.kind != b.kind) return false;
  }
  return true;
}

namespace {

void renumber(Term& t, std::vector<VarId>& mapping, VarId& next) {
  if (t.is_var()) {
    if (t.id >= mapping.size()) mapping.resize(t.id + 1, UINT32_MAX);
    if (mapping[t.id] == UINT32_MAX) mapping[t.id] = next++;
    t.id = mapping[t.id];
    return;
  }
  for (auto& a : t.args) renumber(a, mapping, next);
}

bool is_plain_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (name[0] == '$') return name.size() > 1;
  bool digits = std::all_of(name.begin(), name.end(), [](unsigned char ch) { return std::isdigit(ch); });
  if (digits) return true;
  if (!std::islower(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(),
                     [](unsigned char ch) { return std::isalnum(ch) || ch == '_'; });
}

void append_name(std::string& out, std::string_view name) {
  if (is_plain_identifier(name)) {
    out += name;
    return;
  }
  out += '\'';
  for (char ch : name) {
    if (ch == '\'' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '\'';
}

void append_term(std::string& out, const Term& t, const Signature& sig) {
  if (t.is_var()) {
    out += 'X';
    out += std::to_string(t.id);
    return;
  }
  append_name(out, sig[t.id].name);
  if (t.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    append_term(out, t.args[i], sig);
  }
  out += ')';
}

void append_literal(std::string& out, const Literal& lit, const Signature& sig) {
  const Symbol& p = sig[lit.predicate];
  if (p.name == kEqualityName && lit.args.size() == 2) {
    append_term(out, lit.args[0], sig);
    out += lit.positive ? " = " : " != ";
    append_term(out, lit.args[1], sig);
    return;
  }
  if (!lit.positive) out += '~';
  append_term(out, Term::app(lit.predicate, lit.args), sig);
}

}  // namespace

VarId normalize_variables(std::vector<Literal>& literals) {
  std::vector<VarId> mapping;
  VarId next = 0;
  for (auto& lit : literals) {
    for (auto& a : lit.args) renumber(a, mapping, next);
  }
  return next;
}

std::size_t term_len(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += term_len(a);
  return n;
}

std::size_t literal_len(const Literal& lit) {
  std::size_t n = 1;
  for (const auto& a : lit.args) n += term_len(a);
  return n;
}

std::size_t clause_len(std::span<const Literal> literals) {
  std::size_t n = 0;
  for (const auto& lit : literals) n += literal_len(lit);
  return n;
}

std::size_t clause_len(const Clause& c) { return clause_len(c.literals); }

std::size_t term_depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& a : t.args) d = std::max(d, term_depth(a));
  return d + 1;
}

std::size_t clause_depth(const Clause& c) {
  std::size_t d = 0;
  for (const auto& lit : c.literals) {
    for (const auto& a : lit.args) d = std::max(d, term_depth(a));
  }
  return d;
}

namespace {
std::size_t count_vars(const Term& t) {
  if (t.is_var()) return 1;
  std::size_t n = 0;
  for (const auto& a : t.args) n += count_vars(a);
  return n;
}
}  // namespace

std::size_t count_variable_occurrences(const Clause& c) {
  std::size_t n = 0;
  for (const auto& lit : c.literals) {
    for (const auto& a : lit.args) n += count_vars(a);
  }
  return n;
}

std::string to_string(const Term& t, const Signature& sig) {
  std::string out;
  append_term(out, t, sig);
  return out;
}

std::string to_string(const Literal& lit, const Signature& sig) {
  std::string out;
  append_literal(out, lit, sig);
  return out;
}

std::string to_string(std::span<const Literal> literals, const Signature& sig) {
  if (literals.empty()) return "$false";
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) out += " | ";
    append_literal(out, literals[i], sig);
  }
  return out;
}

std::string to_string(const Clause& c, const Signature& sig) { return to_string(c.literals, sig); }

std::string to_tptp(const Clause& c, const Signature& sig, std::string_view role) {
  std::string out = "cnf(";
  if (c.name.empty()) {
    out += 'c';
    out += std::to_string(c.id);
  } else {
    append_name(out, c.name);
  }
  out += ", ";
  out += role;
  out += ", (";
  out += to_string(c, sig);
  out += ")).";
  return out;
}

}  // namespace enigma

#include "enigma/sparse_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "enigma/error.hpp"
#include "text_util.hpp"

namespace enigma {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::split_ws;

namespace {

std::string format_value(double v) {
  if (v == std::floor(v) && std::fabs(v) < 9.0e15) return std::to_string(static_cast<long long>(v));
  return format_double(v);
}

[[noreturn]] void format_error(std::string_view source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::FormatError,
              std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void write_example(std::ostream& out, Label label, const SparseVector& x) {
  out << (label == Label::Positive ? "+1" : "-1");
  for (const auto& e : x.entries) out << ' ' << e.index << ':' << format_value(e.value);
  out << '\n';
}

void write_training_set(std::ostream& out, const TrainingSet& data) {
  for (std::size_t i = 0; i < data.size(); ++i) write_example(out, data.y[i], data.x[i]);
}

void write_training_set(const TrainingSet& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  write_training_set(out, data);
}

TrainingSet read_training_set(std::istream& in, std::uint64_t dimension, std::string_view source) {
  TrainingSet data;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    Label label;
    if (fields[0] == "+1" || fields[0] == "1") {
      label = Label::Positive;
    } else if (fields[0] == "-1") {
      label = Label::Negative;
    } else {
      format_error(source, lineno, "label must be +1 or -1, got '" + std::string(fields[0]) + "'");
    }
    SparseVector v;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      auto colon = fields[k].find(':');
      if (colon == std::string_view::npos) format_error(source, lineno, "expected <index>:<value>");
      auto idx = parse_int<std::uint64_t>(fields[k].substr(0, colon));
      auto val = parse_double(fields[k].substr(colon + 1));
      if (!idx || !val || *idx == 0) format_error(source, lineno, "malformed feature '" + std::string(fields[k]) + "'");
      if (!v.entries.empty() && v.entries.back().index >= *idx) {
        format_error(source, lineno, "feature indices must be strictly increasing");
      }
      if (dimension != 0 && *idx > dimension) {
        format_error(source, lineno, "feature index " + std::to_string(*idx) + " exceeds dimension " +
                                         std::to_string(dimension));
      }
      max_index = std::max(max_index, *idx);
      v.entries.push_back({*idx, *val});
    }
    data.x.push_back(std::move(v));
    data.y.push_back(label);
  }
  data.dimension = dimension != 0 ? dimension : max_index;
  for (auto& v : data.x) v.dimension = data.dimension;
  return data;
}

TrainingSet read_training_set(const std::filesystem::path& path, std::uint64_t dimension) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open examples file '" + path.string() + "'");
  return read_training_set(in, dimension, path.string());
}

void write_signature(std::ostream& out, const Signature& sig) {
  out << "skolem-prefixes";
  for (const auto& p : sig.skolem_prefixes()) out << ' ' << p;
  out << '\n';
  out << "symbols " << sig.size() << '\n';
  for (const auto& s : sig.symbols()) {
    out << s.id << ' ' << s.arity << ' ' << to_string(s.kind) << ' ' << s.name << '\n';
  }
}

void write_signature(const Signature& sig, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  write_signature(out, sig);
}

Signature read_signature(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() {
    if (!std::getline(in, line)) format_error(source, lineno, "unexpected end of file");
    ++lineno;
    return split_ws(line);
  };
  auto head = next();
  if (head.empty() || head[0] != "skolem-prefixes") format_error(source, lineno, "expected skolem-prefixes");
  std::vector<std::string> prefixes(head.begin() + 1, head.end());
  auto count_line = next();
  std::optional<std::size_t> count;
  if (count_line.size() == 2 && count_line[0] == "symbols") count = parse_int<std::size_t>(count_line[1]);
  if (!count || *count < kNumMarkers) format_error(source, lineno, "expected 'symbols <n>'");
  Signature sig(prefixes);
  for (std::size_t i = 0; i < *count; ++i) {
    auto f = next();
    if (f.size() < 4) format_error(source, lineno, "malformed symbol line");
    auto id = parse_int<std::size_t>(f[0]);
    auto arity = parse_int<std::uint32_t>(f[1]);
    auto kind = symbol_kind_from_string(f[2]);
    // Name is the remainder of the line.
    std::string_view name(line);
    name = name.substr(static_cast<std::size_t>(f[3].data() - line.data()));
    name = detail::trim(name);
    if (!id || !arity || !kind || *id != i) format_error(source, lineno, "malformed symbol line");
    if (i < kNumMarkers) {
      if (sig[static_cast<SymbolId>(i)].name != name) format_error(source, lineno, "unexpected marker symbol");
      continue;
    }
    try {
      if (sig.intern(name, *arity, *kind) != i) format_error(source, lineno, "duplicate symbol");
    } catch (const Error& e) {
      if (e.code() == ErrorCode::FormatError) throw;
      format_error(source, lineno, e.what());
    }
  }
  sig.freeze();
  return sig;
}

Signature read_signature(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open signature file '" + path.string() + "'");
  return read_signature(in, path.string());
}

TrainingSet remap_training_set(const TrainingSet& data, const Signature& from, const Signature& to,
                               std::uint64_t* dropped) {
  std::vector<std::int64_t> code(from.size() + 1, -1);
  for (const auto& s : from.symbols()) {
    if (auto id = to.lookup(s.name); id && to[*id].arity == s.arity && to[*id].kind == s.kind) {
      code[s.id] = *id;
    }
  }
  code[from.size()] = static_cast<std::int64_t>(to.size());  // ε
  const std::uint64_t from_base = feature_base(from);
  const std::uint64_t to_base = feature_base(to);
  TrainingSet out;
  out.dimension = feature_dimension(to);
  for (std::size_t i = 0; i < data.size(); ++i) {
    SparseVector v;
    v.dimension = out.dimension;
    for (const auto& e : data.x[i].entries) {
      std::uint64_t c1, c2, c3;
      decode_feature_code(e.index, from_base, c1, c2, c3);
      if (c1 >= code.size() || c2 >= code.size() || c3 >= code.size() || code[c1] < 0 ||
          code[c2] < 0 || code[c3] < 0) {
        if (dropped) *dropped += static_cast<std::uint64_t>(e.value);
        continue;
      }
      v.entries.push_back({feature_code(code[c1], code[c2], code[c3], to_base), e.value});
    }
    std::sort(v.entries.begin(), v.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    out.add(std::move(v), data.y[i]);
  }
  return out;
}

}  // namespace enigma

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "enigma/error.hpp"
#include "enigma/linear_learner.hpp"
#include "enigma/sparse_io.hpp"
#include "text_util.hpp"

namespace enigma {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::split_ws;

namespace {

constexpr std::string_view kMagic = "enigma-model 1";

}  // namespace

void save_model(const Model& model, std::ostream& out) {
  const ModelInfo& info = model.info();
  out << kMagic << '\n';
  out << "dimension " << model.dimension() << '\n';
  out << "c " << format_double(info.c) << '\n';
  out << "tolerance " << format_double(info.tolerance) << '\n';
  out << "epochs " << info.epochs << '\n';
  out << "violation " << format_double(info.max_violation) << '\n';
  out << "examples " << info.examples << '\n';
  write_signature(out, model.signature());
  std::size_t nnz = 0;
  for (double v : model.weights()) nnz += v != 0;
  out << "weights " << nnz << '\n';
  auto w = model.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0) out << (i + 1) << ' ' << format_double(w[i]) << '\n';
  }
  out << "end\n";
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write model '" + path.string() + "'");
  save_model(model, out);
  if (!out) throw Error(ErrorCode::IoError, "failed writing model '" + path.string() + "'");
}

Model load_model(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) -> void {
    throw Error(ErrorCode::FormatError, std::string(source) + ":" + std::to_string(lineno) + ": " + what);
  };
  auto next = [&]() {
    if (!std::getline(in, line)) fail("truncated model file");
    ++lineno;
    return split_ws(line);
  };
  auto keyed = [&](std::string_view key) {
    auto f = next();
    if (f.size() != 2 || f[0] != key) fail("expected '" + std::string(key) + " <value>'");
    return std::string(f[1]);
  };

  if (!std::getline(in, line) || line != kMagic) {
    ++lineno;
    fail("not an enigma model file");
  }
  ++lineno;
  auto dimension = parse_int<std::uint64_t>(keyed("dimension"));
  ModelInfo info;
  auto c = parse_double(keyed("c"));
  auto tol = parse_double(keyed("tolerance"));
  auto epochs = parse_int<std::uint32_t>(keyed("epochs"));
  auto viol = parse_double(keyed("violation"));
  auto examples = parse_int<std::uint64_t>(keyed("examples"));
  if (!dimension || !c || !tol || !epochs || !viol || !examples) fail("malformed header value");
  info = ModelInfo{*c, *tol, *epochs, *viol, *examples};

  // The symbol table runs until the `weights` line.
  std::ostringstream table;
  std::size_t table_start = lineno;
  for (;;) {
    if (!std::getline(in, line)) fail("truncated model file");
    ++lineno;
    if (line.rfind("weights ", 0) == 0) break;
    table << line << '\n';
  }
  std::istringstream table_in(table.str());
  Signature sig = [&] {
    try {
      return read_signature(table_in, std::string(source) + "(symbols@" + std::to_string(table_start) + ")");
    } catch (const Error& e) {
      throw Error(ErrorCode::FormatError, e.what());
    }
  }();
  if (feature_dimension(sig) != *dimension) fail("dimension does not match the symbol table");

  auto weights_head = split_ws(line);
  auto nnz = weights_head.size() == 2 ? parse_int<std::uint64_t>(weights_head[1]) : std::nullopt;
  if (!nnz) fail("malformed weights count");
  std::vector<double> w(*dimension, 0.0);
  std::uint64_t last = 0;
  for (std::uint64_t k = 0; k < *nnz; ++k) {
    auto f = next();
    if (f.size() != 2) fail("malformed weight line");
    auto idx = parse_int<std::uint64_t>(f[0]);
    auto val = parse_double(f[1]);
    if (!idx || !val || *idx == 0 || *idx > *dimension || *idx <= last || !std::isfinite(*val)) {
      fail("malformed weight line");
    }
    last = *idx;
    w[*idx - 1] = *val;
  }
  auto trailer = next();
  if (trailer.size() != 1 || trailer[0] != "end") fail("missing 'end' trailer");
  return Model(std::move(sig), std::move(w), info);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open model '" + path.string() + "'");
  return load_model(in, path.string());
}

}  // namespace enigma

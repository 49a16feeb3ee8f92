#include "enigma/guidance.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

#include "enigma/error.hpp"
#include "text_util.hpp"

namespace enigma {

double preweight(Label predicted) {
  return predicted == Label::Positive ? kPositivePreweight : kNegativePreweight;
}

double preweight(const Clause& c, const Model& model, const Signature& sig) {
  return preweight(predict(c, model, sig));
}

double weight(std::size_t len, Label predicted, double gamma) {
  return gamma * static_cast<double>(len) + preweight(predicted);
}

double weight(const Clause& c, const Model& model, double gamma, const Signature& sig) {
  return weight(clause_len(c), predict(c, model, sig), gamma);
}

namespace {

double symbol_count(const Clause& c) {
  auto vars = static_cast<double>(count_variable_occurrences(c));
  return static_cast<double>(clause_len(c)) - 0.5 * vars;
}

}  // namespace

std::string Cef::name() const {
  struct Namer {
    std::string operator()(const LearnedWeight& l) const {
      return "Learned(" + l.model_name + ",gamma=" + detail::format_double(l.gamma) + ")";
    }
    std::string operator()(const ClauseLenWeight&) const { return "ClauseLen"; }
    std::string operator()(const FifoWeight&) const { return "FIFO"; }
    std::string operator()(const SymbolCountWeight&) const { return "SymbolCount"; }
  };
  return std::visit(Namer{}, kind);
}

Cef learned_cef(std::shared_ptr<const Model> model, double gamma, std::string model_name) {
  if (!(gamma >= 0)) throw Error(ErrorCode::InvalidArgument, "gamma must be non-negative");
  return Cef{LearnedWeight{std::move(model), gamma, std::move(model_name)}};
}

Strategy::Strategy(std::vector<StrategyEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidArgument, "a strategy needs at least one CEF");
  for (const auto& e : entries_) {
    if (e.frequency == 0) {
      throw Error(ErrorCode::InvalidArgument, "CEF frequency must be at least 1 (" + e.cef.name() + ")");
    }
    if (const auto* l = std::get_if<LearnedWeight>(&e.cef.kind)) {
      if (!l->model) throw Error(ErrorCode::InvalidArgument, "learned CEF without a model");
      if (!(l->gamma >= 0)) throw Error(ErrorCode::InvalidArgument, "gamma must be non-negative");
    }
    cycle_ += e.frequency;
    ends_.push_back(cycle_);
  }
}

std::size_t Strategy::index_at(std::uint64_t step) const {
  std::uint64_t pos = step % cycle_;
  return static_cast<std::size_t>(std::upper_bound(ends_.begin(), ends_.end(), pos) - ends_.begin());
}

Strategy Strategy::with(std::uint32_t frequency, Cef cef) const {
  std::vector<StrategyEntry> e = entries_;
  e.push_back({frequency, std::move(cef)});
  return Strategy(std::move(e));
}

const Cef& next_cef(const Strategy& s, std::uint64_t step) { return s.entries()[s.index_at(step)].cef; }

Strategy baseline_strategy() {
  return Strategy({{1, Cef{FifoWeight{}}}, {4, Cef{SymbolCountWeight{}}}});
}

double evaluate(const Clause& c, const Cef& cef, const Signature& sig) {
  struct Eval {
    const Clause& c;
    const Signature& sig;
    double operator()(const LearnedWeight& l) const { return weight(c, *l.model, l.gamma, sig); }
    double operator()(const ClauseLenWeight&) const { return static_cast<double>(clause_len(c)); }
    double operator()(const FifoWeight&) const { return static_cast<double>(c.age); }
    double operator()(const SymbolCountWeight&) const { return symbol_count(c); }
  };
  return std::visit(Eval{c, sig}, cef.kind);
}

ClauseEvaluator::ClauseEvaluator(const Strategy& strategy, const Signature& source)
    : strategy_(&strategy), source_(&source) {
  for (const auto& e : strategy.entries()) {
    if (const auto* l = std::get_if<LearnedWeight>(&e.cef.kind)) {
      encoders_.try_emplace(l->model.get(), l->model->signature());
    }
  }
}

double ClauseEvaluator::evaluate(std::size_t entry, const Clause& c) {
  const Cef& cef = strategy_->entries()[entry].cef;
  if (const auto* l = std::get_if<LearnedWeight>(&cef.kind)) {
    FeatureEncoder& enc = encoders_.at(l->model.get());
    Label predicted = l->model->classify(enc.encode(c, *source_));
    return weight(clause_len(c), predicted, l->gamma);
  }
  return enigma::evaluate(c, cef, *source_);
}

std::uint64_t ClauseEvaluator::dropped_features() const {
  std::uint64_t n = 0;
  for (const auto& [model, enc] : encoders_) n += enc.dropped();
  return n;
}

ModelResolver file_model_resolver() {
  struct Cache {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const Model>> models;
  };
  auto cache = std::make_shared<Cache>();
  return [cache](const std::string& name) {
    std::lock_guard<std::mutex> lock(cache->mutex);
    auto& slot = cache->models[name];
    if (!slot) slot = std::make_shared<const Model>(load_model(std::filesystem::path(name)));
    return slot;
  };
}

namespace {

class StrategyParser {
 public:
  StrategyParser(std::string_view text, const ModelResolver& resolver)
      : text_(text), resolver_(resolver) {}

  Strategy parse() {
    std::vector<StrategyEntry> entries;
    do {
      item(entries);
      skip_ws();
    } while (accept(',') || accept('+'));
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_, 1)) + "'");
    if (entries.empty()) fail("empty strategy");
    return Strategy(std::move(entries));
  }

 private:
  void item(std::vector<StrategyEntry>& out) {
    skip_ws();
    std::uint32_t freq = 1;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      auto f = detail::parse_int<std::uint32_t>(text_.substr(start, pos_ - start));
      if (!f || *f == 0) fail("frequency must be a positive integer");
      freq = *f;
      skip_ws();
      if (!accept('*')) fail("expected '*' after frequency");
    }
    std::string word = identifier();
    if (word == "baseline") {
      if (freq != 1) fail("'baseline' takes no frequency");
      Strategy base = baseline_strategy();
      for (const auto& e : base.entries()) out.push_back(e);
    } else if (word == "FIFO") {
      out.push_back({freq, Cef{FifoWeight{}}});
    } else if (word == "ClauseLen") {
      out.push_back({freq, Cef{ClauseLenWeight{}}});
    } else if (word == "SymbolCount") {
      out.push_back({freq, Cef{SymbolCountWeight{}}});
    } else if (word == "Learned") {
      out.push_back({freq, learned()});
    } else {
      fail("unknown CEF '" + word + "'");
    }
  }

  Cef learned() {
    if (!accept('(')) fail("expected '(' after Learned");
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
    std::string model(detail::trim(text_.substr(start, pos_ - start)));
    if (model.empty()) fail("Learned() needs a model");
    double gamma = 0.2;
    if (accept(',')) {
      skip_ws();
      if (text_.substr(pos_, 6) != "gamma=") fail("expected 'gamma='");
      pos_ += 6;
      std::size_t vstart = pos_;
      while (pos_ < text_.size() && text_[pos_] != ')') ++pos_;
      auto g = detail::parse_double(detail::trim(text_.substr(vstart, pos_ - vstart)));
      if (!g || !(*g >= 0)) fail("gamma must be a non-negative number");
      gamma = *g;
    }
    if (!accept(')')) fail("expected ')'");
    std::shared_ptr<const Model> m;
    try {
      m = resolver_(model);
    } catch (const Error& e) {
      throw Error(e.code(), "strategy references model '" + model + "': " + e.what());
    }
    if (!m) fail("unknown model '" + model + "'");
    return learned_cef(std::move(m), gamma, model);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a CEF name");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "strategy '" + std::string(text_) + "' at offset " +
                                           std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  const ModelResolver& resolver_;
  std::size_t pos_ = 0;
};

}  // namespace

Strategy parse_strategy(std::string_view text, const ModelResolver& resolver) {
  return StrategyParser(text, resolver).parse();
}

std::string format_strategy(const Strategy& s) {
  std::string out;
  for (const auto& e : s.entries()) {
    if (!out.empty()) out += ',';
    out += std::to_string(e.frequency) + "*" + e.cef.name();
  }
  return out;
}

}  // namespace enigma

#pragma once

// FEACI scoring (format, explanation, accuracy, cost, inference time), the
// weighted evaluation score and the BLEU/ROUGE text baselines.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "intent_bench/backends.hpp"
#include "intent_bench/catalog.hpp"
#include "intent_bench/error.hpp"
#include "intent_bench/promptkit.hpp"
#include "intent_bench/util.hpp"

namespace intent_bench {

// ---------------------------------------------------------------------------
// Format: extraction of a schema-valid config from a response.

enum class ExtractionFailure { kNone, kNoBlock, kParseError, kSchemaError };

inline std::string_view to_string(ExtractionFailure f) {
  switch (f) {
    case ExtractionFailure::kNone: return "ok";
    case ExtractionFailure::kNoBlock: return "no-block";
    case ExtractionFailure::kParseError: return "parse-error";
    case ExtractionFailure::kSchemaError: return "schema-error";
  }
  return "?";
}

struct Extraction {
  std::optional<ResourceConfig> config;
  ExtractionFailure failure = ExtractionFailure::kNoBlock;
  std::string diagnostic;

  bool format_ok() const { return config.has_value(); }
};

struct FencedBlock {
  std::string language;
  std::string body;
  std::size_t begin = 0;  // offset of the opening fence
  std::size_t end = 0;    // one past the closing fence line (or end of text)
};

// Splits out ``` fenced blocks in order. An unterminated fence runs to the
// end of the text.
inline std::vector<FencedBlock> fenced_blocks(std::string_view text) {
  std::vector<FencedBlock> out;
  std::size_t pos = 0;
  std::optional<FencedBlock> open;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    const std::size_t next = eol == std::string_view::npos ? text.size() : eol + 1;
    const std::string_view line = text.substr(pos, next - pos);
    const std::string_view t = trim(line);
    if (t.substr(0, 3) == "```") {
      if (!open) {
        FencedBlock b;
        b.language = to_lower(trim(t.substr(3)));
        b.begin = pos;
        open = b;
      } else {
        open->end = next;
        out.push_back(std::move(*open));
        open.reset();
      }
    } else if (open) {
      open->body.append(line);
    }
    pos = next;
  }
  if (open) {
    open->end = text.size();
    out.push_back(std::move(*open));
  }
  return out;
}

// Text outside every fenced block.
inline std::string prose_outside_blocks(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& b : fenced_blocks(text)) {
    out.append(text.substr(pos, b.begin - pos));
    pos = b.end;
  }
  if (pos < text.size()) out.append(text.substr(pos));
  return out;
}

namespace detail {

inline std::optional<YAML::Node> try_load(std::string_view doc, std::string* error) {
  try {
    return YAML::Load(std::string(doc));
  } catch (const YAML::Exception& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

}  // namespace detail

// Scans fenced blocks in order, then the whole body, returning the first
// document that parses as a mapping and passes the config schema. Never
// throws: failure is reported in the result.
inline Extraction extract_config(std::string_view response_text) {
  Extraction ex;
  bool saw_parse_error = false, saw_schema_error = false;
  std::string parse_diag, schema_diag;

  auto attempt = [&](std::string_view doc, bool fenced) -> bool {
    std::string err;
    auto node = detail::try_load(doc, &err);
    if (!node || !node->IsMap()) {
      if (fenced) {
        saw_parse_error = true;
        if (parse_diag.empty()) parse_diag = node ? "block is not a mapping" : err;
      }
      return false;
    }
    try {
      ex.config = parse_resource_config(*node, "response");
      return true;
    } catch (const ValidationError& e) {
      saw_schema_error = true;
      if (schema_diag.empty()) schema_diag = e.what();
    } catch (const YAML::Exception& e) {
      saw_schema_error = true;
      if (schema_diag.empty()) schema_diag = e.what();
    }
    return false;
  };

  for (const auto& b : fenced_blocks(response_text)) {
    if (attempt(b.body, true)) {
      ex.failure = ExtractionFailure::kNone;
      return ex;
    }
  }
  if (attempt(response_text, false)) {
    ex.failure = ExtractionFailure::kNone;
    return ex;
  }
  if (saw_schema_error) {
    ex.failure = ExtractionFailure::kSchemaError;
    ex.diagnostic = schema_diag;
  } else if (saw_parse_error) {
    ex.failure = ExtractionFailure::kParseError;
    ex.diagnostic = parse_diag;
  } else {
    ex.failure = ExtractionFailure::kNoBlock;
    ex.diagnostic = "no configuration block found";
  }
  return ex;
}

// ---------------------------------------------------------------------------
// Accuracy.

// Fraction of reference leaves the candidate reproduces. Extra candidate
// leaves are ignored.
inline double accuracy_score(const LeafMap& candidate, const LeafMap& reference) {
  if (reference.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& [path, ref_value] : reference) {
    auto it = candidate.find(path);
    if (it != candidate.end() && scalar_matches(it->second, ref_value)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(reference.size());
}

inline double accuracy_score(const ResourceConfig& candidate, const ResourceConfig& reference) {
  return accuracy_score(flatten_config(candidate), flatten_config(reference));
}

// ---------------------------------------------------------------------------
// Explanation.

struct Annotation {
  std::string trial_id;
  bool explanation_ok = false;
  std::string annotator;
  std::string note;
};

// Human verdicts keyed by trial id; later rows override earlier ones.
class AnnotationStore {
 public:
  void add(Annotation a) { verdicts_[a.trial_id] = std::move(a); }

  std::optional<bool> lookup(const std::string& trial_id) const {
    auto it = verdicts_.find(trial_id);
    if (it == verdicts_.end()) return std::nullopt;
    return it->second.explanation_ok;
  }

  std::size_t size() const { return verdicts_.size(); }

 private:
  std::map<std::string, Annotation> verdicts_;
};

namespace detail {

// RFC 4180-style field splitting with double-quote escaping.
inline std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) return std::nullopt;
  return fields;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline constexpr std::string_view kAnnotationHeader = "trial_id,explanation_ok,annotator,note";

// Parses annotations.csv. Throws ConfigError on a malformed store.
inline AnnotationStore parse_annotations(std::string_view csv) {
  AnnotationStore store;
  const auto lines = split(csv, '\n');
  bool header_seen = false;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = trim(lines[n]);
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    const std::string where = "annotations.csv line " + std::to_string(n + 1);
    if (!fields) throw ConfigError(where + ": unterminated quote");
    if (!header_seen) {
      header_seen = true;
      if (fields->size() < 2 || trim((*fields)[0]) != "trial_id" ||
          trim((*fields)[1]) != "explanation_ok")
        throw ConfigError(where + ": expected header " + std::string(kAnnotationHeader));
      continue;
    }
    if (fields->size() < 2 || fields->size() > 4)
      throw ConfigError(where + ": expected 2 to 4 columns");
    Annotation a;
    a.trial_id = std::string(trim((*fields)[0]));
    const auto flag = trim((*fields)[1]);
    if (a.trial_id.empty()) throw ConfigError(where + ": empty trial_id");
    if (flag == "1") {
      a.explanation_ok = true;
    } else if (flag == "0") {
      a.explanation_ok = false;
    } else {
      throw ConfigError(where + ": explanation_ok must be 0 or 1");
    }
    if (fields->size() > 2) a.annotator = (*fields)[2];
    if (fields->size() > 3) a.note = (*fields)[3];
    store.add(std::move(a));
  }
  return store;
}

// A missing file is an empty store.
inline AnnotationStore load_annotations(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return parse_annotations(read_file(path));
}

inline void append_annotation(const std::filesystem::path& path, const Annotation& a) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw LoadError("cannot write " + path.string());
  if (fresh) out << kAnnotationHeader << "\n";
  // One record per line: embedded newlines in free text become spaces.
  auto flat = [](std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return detail::csv_escape(s);
  };
  out << flat(a.trial_id) << ',' << (a.explanation_ok ? 1 : 0) << ',' << flat(a.annotator) << ','
      << flat(a.note) << "\n";
}

namespace detail {

inline bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '.'; }

// Case-insensitive occurrence not glued to neighbouring word characters.
inline bool contains_token(std::string_view hay_lower, std::string_view needle) {
  const std::string n = to_lower(trim(needle));
  if (n.empty()) return false;
  for (auto pos = hay_lower.find(n); pos != std::string_view::npos;
       pos = hay_lower.find(n, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(hay_lower[pos - 1]));
    const std::size_t after = pos + n.size();
    bool right_ok = true;
    if (after < hay_lower.size()) {
      const auto next = static_cast<unsigned char>(hay_lower[after]);
      if (std::isdigit(static_cast<unsigned char>(n.back()))) {
        // "10" must not match inside "100" or "10.5", but "10ms" is fine.
        const bool decimal = next == '.' && after + 1 < hay_lower.size() &&
                             std::isdigit(static_cast<unsigned char>(hay_lower[after + 1]));
        right_ok = !std::isdigit(next) && !decimal;
      } else {
        right_ok = !std::isalnum(next);
      }
    }
    if (left_ok && right_ok) return true;
  }
  return false;
}

inline bool has_arithmetic(std::string text) {
  // Normalise the common multiplication glyphs.
  for (const std::string_view glyph : {"\xC3\x97", "\xE2\x8B\x85", "\xC2\xB7"}) {
    for (auto pos = text.find(glyph); pos != std::string::npos; pos = text.find(glyph, pos))
      text.replace(pos, glyph.size(), "*");
  }
  static const std::regex pattern(
      R"(\d+(\.\d+)?\s*[a-zA-Z%]*\s*([-+*/]|\bx\b)\s*\(?\s*\d+(\.\d+)?[^=\n]*=\s*-?\d)");
  return std::regex_search(text, pattern);
}

}  // namespace detail

// Deterministic explanation rubric: prose outside the config block must be
// non-empty and mention at least one intent name or value of the order; in
// FEW mode it must also show at least one arithmetic derivation.
inline bool explanation_rubric(std::string_view response_text, const ServiceOrder& order,
                               PromptMode mode) {
  std::string prose = prose_outside_blocks(response_text);
  // A bare structured document outside any fence is data, not prose. A
  // single "key: value" sentence still counts as prose.
  if (auto node = detail::try_load(prose, nullptr); node && node->IsMap()) {
    for (const auto& kv : *node)
      if (kv.second.IsMap() || kv.second.IsSequence()) {
        prose.clear();
        break;
      }
  }
  if (trim(prose).empty()) return false;
  const std::string lower = to_lower(prose);
  bool mentions = false;
  for (const auto& [name, value] : order.intents) {
    std::string spaced = name;
    std::replace(spaced.begin(), spaced.end(), '_', ' ');
    if (detail::contains_token(lower, name) || detail::contains_token(lower, spaced) ||
        detail::contains_token(lower, to_string(value))) {
      mentions = true;
      break;
    }
  }
  if (!mentions) return false;
  if (mode == PromptMode::kFew && !detail::has_arithmetic(prose)) return false;
  return true;
}

// Human verdict when annotated, rubric otherwise.
inline bool explanation_judge(std::string_view response_text, const ServiceOrder& order,
                              PromptMode mode, const AnnotationStore& overrides,
                              const std::string& trial_id) {
  if (auto verdict = overrides.lookup(trial_id)) return *verdict;
  return explanation_rubric(response_text, order, mode);
}

// ---------------------------------------------------------------------------
// Cost, inference time and the weighted score.

struct Thresholds {
  double c0_usd = 0.1;
  double i0_s = 60;

  void validate() const {
    if (!(c0_usd > 0)) throw ConfigError("c0 must be > 0");
    if (!(i0_s > 0)) throw ConfigError("i0 must be > 0");
  }
};

struct Weights {
  double format = 0.2;
  double explanation = 0.2;
  double accuracy = 0.2;
  double cost = 0.2;
  double inference = 0.2;

  void validate() const {
    for (double w : {format, explanation, accuracy, cost, inference})
      if (!(w >= 0 && w <= 1)) throw ConfigError("weights must each lie in [0, 1]");
  }

  // Parses "w1,w2,w3,w4,w5".
  static Weights parse(std::string_view csv) {
    const auto parts = split(csv, ',');
    if (parts.size() != 5) throw UsageError("--weights needs five comma-separated numbers");
    double v[5];
    for (std::size_t i = 0; i < 5; ++i)
      if (!parse_number(parts[i], v[i])) throw UsageError("--weights: not a number: " + parts[i]);
    Weights w{v[0], v[1], v[2], v[3], v[4]};
    w.validate();
    return w;
  }
};

// min(C / C0, 1).
inline double normalize_cost(double cost_usd, const Thresholds& t) {
  return std::min(std::max(cost_usd, 0.0) / t.c0_usd, 1.0);
}

// min(I / I0, 1).
inline double normalize_inference(double latency_s, const Thresholds& t) {
  return std::min(std::max(latency_s, 0.0) / t.i0_s, 1.0);
}

struct AggregateScore {
  std::string backend;
  PromptMode mode = PromptMode::kZero;
  double F = 0, E = 0, A = 0, C = 0, I = 0;
  double e_serv = 0;
  std::size_t n_trials = 0;
  std::size_t n_failed = 0;  // backend errors, excluded from the means
  double mean_tokens_in = 0, mean_tokens_out = 0;
  double bleu = 0, rouge1 = 0, rouge2 = 0, rougeL = 0;
};

inline double eval_score(double F, double E, double A, double C, double I, const Weights& w) {
  return w.format * F + w.explanation * E + w.accuracy * A - w.cost * C - w.inference * I;
}

inline double eval_score(const AggregateScore& agg, const Weights& w) {
  return eval_score(agg.F, agg.E, agg.A, agg.C, agg.I, w);
}

// ---------------------------------------------------------------------------
// Text baselines.

// Lower-cased runs of alphanumerics (bytes >= 0x80 count as letters so UTF-8
// words stay whole); everything else separates.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace detail {

using Ngram = std::vector<std::string>;

inline std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& toks,
                                                 std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  if (toks.size() < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i)
    ++counts[Ngram(toks.begin() + static_cast<std::ptrdiff_t>(i),
                   toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

// Clipped overlap of candidate n-grams against the reference.
inline std::size_t clipped_overlap(const std::vector<std::string>& cand,
                                   const std::vector<std::string>& ref, std::size_t n) {
  const auto c = ngram_counts(cand, n);
  const auto r = ngram_counts(ref, n);
  std::size_t hits = 0;
  for (const auto& [g, k] : c) {
    auto it = r.find(g);
    if (it != r.end()) hits += std::min(k, it->second);
  }
  return hits;
}

}  // namespace detail

inline constexpr double kBleuEpsilon = 1e-9;

// Sentence-level BLEU-4: geometric mean of clipped n-gram precisions with
// uniform weights, brevity penalty, and a zero match count replaced by
// epsilon. Candidates shorter than four tokens use their own length as the
// maximum order.
inline double bleu(std::string_view candidate, std::string_view reference) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  if (c.empty() || r.empty()) return 0.0;
  const std::size_t max_n = std::min<std::size_t>(4, c.size());
  double log_sum = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const double total = static_cast<double>(c.size() - n + 1);
    const auto hits = detail::clipped_overlap(c, r, n);
    const double p = hits == 0 ? kBleuEpsilon / total : static_cast<double>(hits) / total;
    log_sum += std::log(p);
  }
  const double geo = std::exp(log_sum / static_cast<double>(max_n));
  const double cl = static_cast<double>(c.size()), rl = static_cast<double>(r.size());
  const double bp = cl > rl ? 1.0 : std::exp(1.0 - rl / cl);
  return bp * geo;
}

enum class RougeVariant { kR1, kR2, kRL };

inline std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline double f1(double hits, double cand_total, double ref_total) {
  if (hits <= 0 || cand_total <= 0 || ref_total <= 0) return 0.0;
  const double p = hits / cand_total, r = hits / ref_total;
  return 2 * p * r / (p + r);
}

// ROUGE-1/2 F1 over n-gram overlap counts; ROUGE-L F1 over the longest
// common subsequence.
inline double rouge(std::string_view candidate, std::string_view reference, RougeVariant v) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  if (v == RougeVariant::kRL) {
    return f1(static_cast<double>(lcs_length(c, r)), static_cast<double>(c.size()),
              static_cast<double>(r.size()));
  }
  const std::size_t n = v == RougeVariant::kR1 ? 1 : 2;
  const double ct = c.size() >= n ? static_cast<double>(c.size() - n + 1) : 0;
  const double rt = r.size() >= n ? static_cast<double>(r.size() - n + 1) : 0;
  return f1(static_cast<double>(detail::clipped_overlap(c, r, n)), ct, rt);
}

// ---------------------------------------------------------------------------
// Per-trial scoring.

struct TrialScore {
  bool format_ok = false;
  bool explanation_ok = false;
  double accuracy = 0;
  double cost_usd = 0;
  double cost_norm = 0;
  double latency_s = 0;
  double latency_norm = 0;
  double bleu = 0, rouge1 = 0, rouge2 = 0, rougeL = 0;
  ExtractionFailure failure = ExtractionFailure::kNone;
};

struct TrialInputs {
  std::string trial_id;
  std::string_view response_text;
  const ServiceOrder* order = nullptr;
  const ResourceConfig* reference = nullptr;
  PromptMode mode = PromptMode::kZero;
  Usage usage;
  double latency_s = 0;
};

struct ScoringOptions {
  Thresholds thresholds;
  bool gate_text_metrics_on_format = true;
};

inline TrialScore score_trial(const TrialInputs& in, const BackendDescriptor& pricing,
                              const AnnotationStore& annotations, const ScoringOptions& opts) {
  TrialScore s;
  const auto ex = extract_config(in.response_text);
  s.format_ok = ex.format_ok();
  s.failure = ex.failure;
  s.accuracy = s.format_ok ? accuracy_score(*ex.config, *in.reference) : 0.0;
  s.explanation_ok =
      explanation_judge(in.response_text, *in.order, in.mode, annotations, in.trial_id);
  s.cost_usd = trial_cost(in.usage, pricing);
  s.cost_norm = normalize_cost(s.cost_usd, opts.thresholds);
  s.latency_s = in.latency_s;
  s.latency_norm = normalize_inference(in.latency_s, opts.thresholds);
  if (s.format_ok || !opts.gate_text_metrics_on_format) {
    const std::string ref = to_yaml(*in.reference);
    s.bleu = bleu(in.response_text, ref);
    s.rouge1 = rouge(in.response_text, ref, RougeVariant::kR1);
    s.rouge2 = rouge(in.response_text, ref, RougeVariant::kR2);
    s.rougeL = rouge(in.response_text, ref, RougeVariant::kRL);
  }
  return s;
}

}  // namespace intent_bench

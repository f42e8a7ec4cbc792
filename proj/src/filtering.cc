#include "mtprep/filtering.h"

#include <json.hpp>

#include "mtprep/error.h"
#include "mtprep/parallel.h"

namespace mtprep {

void FilterConfig::validate() const {
  if (min_tokens < 1) throw ConfigError("min_tokens must be >= 1");
  if (max_tokens < min_tokens) throw ConfigError("max_tokens must be >= min_tokens");
  if (!(max_length_ratio >= 1.0)) throw ConfigError("max_length_ratio must be >= 1");
  if (!(min_alnum_ratio >= 0.0 && min_alnum_ratio <= 1.0))
    throw ConfigError("min_alnum_ratio must be in [0,1]");
  if (!(min_script_ratio >= 0.0 && min_script_ratio <= 1.0))
    throw ConfigError("min_script_ratio must be in [0,1]");
}

std::uint64_t FilterReport::rejected_total() const {
  std::uint64_t total = 0;
  for (const auto& [_, n] : rejected_by_rule) total += n;
  return total;
}

void FilterReport::charge(std::string_view rule_name) {
  ++rejected_by_rule[std::string(rule_name)];
}

void FilterReport::merge(const FilterReport& other) {
  input_count += other.input_count;
  kept_count += other.kept_count;
  for (const auto& [r, n] : other.rejected_by_rule) rejected_by_rule[r] += n;
}

std::string FilterReport::to_json() const {
  nlohmann::ordered_json rejected = nlohmann::ordered_json::object();
  for (auto r : kRuleOrder) {
    auto it = rejected_by_rule.find(std::string(r));
    rejected[std::string(r)] = it == rejected_by_rule.end() ? 0 : it->second;
  }
  nlohmann::ordered_json doc;
  doc["input"] = input_count;
  doc["kept"] = kept_count;
  doc["rejected"] = rejected;
  return doc.dump();
}

FilterReport FilterReport::from_json(std::string_view json) {
  FilterReport report;
  try {
    auto doc = nlohmann::json::parse(json);
    report.input_count = doc.at("input").get<std::uint64_t>();
    report.kept_count = doc.at("kept").get<std::uint64_t>();
    for (const auto& [r, n] : doc.at("rejected").items())
      report.rejected_by_rule[r] = n.get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed filter report: ") + e.what());
  }
  return report;
}

namespace {

struct SideStats {
  std::size_t tokens = 0;
  std::size_t non_space = 0;
  std::size_t alnum = 0;
  std::size_t letters = 0;
  std::size_t in_script = 0;
};

SideStats side_stats(std::string_view text, utf8::Script script) {
  SideStats s;
  bool in_token = false;
  for (std::size_t pos = 0; pos < text.size();) {
    const char32_t c = utf8::next(text, pos);
    if (utf8::is_space(c)) {
      in_token = false;
      continue;
    }
    if (!in_token) ++s.tokens;
    in_token = true;
    ++s.non_space;
    if (utf8::is_alnum(c)) ++s.alnum;
    if (utf8::is_letter(c)) {
      ++s.letters;
      if (utf8::script_of(c) == script) ++s.in_script;
    }
  }
  return s;
}

utf8::Script script_for(const FilterConfig& config, std::string_view lang) {
  auto it = config.expected_scripts.find(std::string(lang));
  if (it == config.expected_scripts.end())
    throw ConfigError("no expected script configured for language '" +
                      std::string(lang) + "'");
  return it->second;
}

std::string dedup_key(const SentencePair& pair) {
  std::string key;
  key.reserve(pair.source.size() + pair.target.size() + 1);
  key += pair.source;
  key.push_back('\n');
  key += pair.target;
  return key;
}

}  // namespace

std::optional<std::string_view> check_stateless(const SentencePair& pair,
                                                const FilterConfig& config,
                                                utf8::Script source_script,
                                                utf8::Script target_script) {
  const SideStats src = side_stats(pair.source, source_script);
  const SideStats tgt = side_stats(pair.target, target_script);
  if (src.tokens == 0 || tgt.tokens == 0) return rule::kNonEmpty;
  for (const auto* s : {&src, &tgt})
    if (s->tokens < config.min_tokens || s->tokens > config.max_tokens)
      return rule::kTokenCount;
  const auto longer = static_cast<double>(std::max(src.tokens, tgt.tokens));
  const auto shorter = static_cast<double>(std::min(src.tokens, tgt.tokens));
  if (longer / shorter > config.max_length_ratio) return rule::kLengthRatio;
  for (const auto* s : {&src, &tgt})
    if (static_cast<double>(s->alnum) / static_cast<double>(s->non_space) <
        config.min_alnum_ratio)
      return rule::kAlnum;
  // A side with no letters at all (numbers, codes) has no script to check.
  for (const auto* s : {&src, &tgt})
    if (s->letters > 0 && static_cast<double>(s->in_script) / static_cast<double>(s->letters) <
                              config.min_script_ratio)
      return rule::kScript;
  return std::nullopt;
}

std::optional<std::string_view> check_pair(const SentencePair& pair,
                                           const FilterConfig& config,
                                           std::string_view source_lang,
                                           std::string_view target_lang) {
  return check_stateless(pair, config, script_for(config, source_lang),
                         script_for(config, target_lang));
}

PairFilter::PairFilter(FilterConfig config, std::string source_lang,
                       std::string target_lang)
    : config_(std::move(config)),
      source_script_(script_for(config_, source_lang)),
      target_script_(script_for(config_, target_lang)) {
  config_.validate();
}

std::optional<std::string_view> PairFilter::check(const SentencePair& pair) {
  auto failed = check_stateless(pair, config_, source_script_, target_script_);
  if (failed == rule::kNonEmpty) return failed;
  if (config_.dedup && !seen_.insert(dedup_key(pair)).second) return rule::kDedup;
  return failed;
}

FilterResult filter_corpus(const ParallelCorpus& corpus, const FilterConfig& config) {
  config.validate();
  const utf8::Script src_script = script_for(config, corpus.source_lang);
  const utf8::Script tgt_script = script_for(config, corpus.target_lang);

  const std::size_t n = corpus.size();
  std::vector<std::optional<std::string_view>> verdicts(n);
  for_each_block(n, 4096, config.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      verdicts[i] = check_stateless(corpus.pairs[i], config, src_script, tgt_script);
  });

  FilterResult result;
  result.kept.source_lang = corpus.source_lang;
  result.kept.target_lang = corpus.target_lang;
  result.report.input_count = n;

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i) {
    auto failed = verdicts[i];
    if (failed != rule::kNonEmpty && config.dedup &&
        !seen.insert(dedup_key(corpus.pairs[i])).second)
      failed = rule::kDedup;
    if (failed) {
      result.report.charge(*failed);
    } else {
      result.kept.pairs.push_back(corpus.pairs[i]);
    }
  }
  result.report.kept_count = result.kept.size();
  return result;
}

}  // namespace mtprep

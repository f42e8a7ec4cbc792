#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "mtprep/corpus.h"
#include "mtprep/utf8.h"

namespace mtprep {

struct FilterConfig {
  std::size_t max_tokens = 128;
  std::size_t min_tokens = 1;
  double max_length_ratio = 3.0;
  double min_alnum_ratio = 0.2;
  std::map<std::string, utf8::Script> expected_scripts = {
      {"uk", utf8::Script::Cyrillic},
      {"lv", utf8::Script::Latin},
      {"lt", utf8::Script::Latin},
      {"et", utf8::Script::Latin},
  };
  double min_script_ratio = 0.5;
  bool dedup = true;
  unsigned threads = 1;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// Rule names, in evaluation order. A rejected pair is charged to the first
// rule it fails.
namespace rule {
inline constexpr std::string_view kNonEmpty = "non-empty";
inline constexpr std::string_view kDedup = "dedup";
inline constexpr std::string_view kTokenCount = "token-count";
inline constexpr std::string_view kLengthRatio = "length-ratio";
inline constexpr std::string_view kAlnum = "alnum";
inline constexpr std::string_view kScript = "script";
}  // namespace rule

inline constexpr std::string_view kRuleOrder[] = {
    rule::kNonEmpty,    rule::kDedup, rule::kTokenCount,
    rule::kLengthRatio, rule::kAlnum, rule::kScript};

struct FilterReport {
  std::uint64_t input_count = 0;
  std::uint64_t kept_count = 0;
  // Every rule of kRuleOrder is present, zero when it rejected nothing.
  std::map<std::string, std::uint64_t> rejected_by_rule{
      {std::string(rule::kNonEmpty), 0},    {std::string(rule::kDedup), 0},
      {std::string(rule::kTokenCount), 0},  {std::string(rule::kLengthRatio), 0},
      {std::string(rule::kAlnum), 0},       {std::string(rule::kScript), 0}};

  std::uint64_t rejected_total() const;
  void charge(std::string_view rule_name);
  void merge(const FilterReport& other);

  // {"input":N,"kept":N,"rejected":{"rule":N,...}}
  std::string to_json() const;
  static FilterReport from_json(std::string_view json);
  bool operator==(const FilterReport&) const = default;
};

// Stateful filter for streaming use: remembers pairs that passed the
// non-empty rule so later duplicates are charged to "dedup".
class PairFilter {
 public:
  PairFilter(FilterConfig config, std::string source_lang, std::string target_lang);

  // nullopt when the pair passes, otherwise the first failing rule.
  std::optional<std::string_view> check(const SentencePair& pair);

  const FilterConfig& config() const { return config_; }

 private:
  FilterConfig config_;
  utf8::Script source_script_;
  utf8::Script target_script_;
  std::unordered_set<std::string> seen_;
};

// Rules other than dedup; pure and safe to call concurrently.
std::optional<std::string_view> check_stateless(const SentencePair& pair,
                                                const FilterConfig& config,
                                                utf8::Script source_script,
                                                utf8::Script target_script);

// Single-pair check with no history (dedup never fires).
std::optional<std::string_view> check_pair(const SentencePair& pair,
                                           const FilterConfig& config,
                                           std::string_view source_lang,
                                           std::string_view target_lang);

struct FilterResult {
  ParallelCorpus kept;
  FilterReport report;
};

// Output and report equal sequential evaluation in input order for any
// config.threads value.
FilterResult filter_corpus(const ParallelCorpus& corpus, const FilterConfig& config);

}  // namespace mtprep

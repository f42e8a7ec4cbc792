#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtprep/corpus.h"

namespace mtprep {

enum class Symmetrize { Intersection, Union, SourceToTarget };

Symmetrize parse_symmetrize(std::string_view name);
std::string_view symmetrize_name(Symmetrize s);

struct AlignConfig {
  unsigned iterations = 5;
  bool use_null = true;
  Symmetrize symmetrize = Symmetrize::Intersection;
  unsigned threads = 1;

  void validate() const;
};

// Lexical translation probabilities t(target | source) of IBM Model 1.
// Rows cover only co-occurring target words and sum to one.
class TranslationTable {
 public:
  static constexpr std::string_view kNull = "<NULL>";

  double prob(std::string_view source, std::string_view target) const;
  // Sum of the row for `source` (1 for every trained source word).
  double row_sum(std::string_view source) const;
  std::size_t source_vocab_size() const { return source_words_.size(); }
  std::size_t size() const { return probs_.size(); }
  bool has_null() const { return has_null_; }

  // "source<TAB>target<TAB>prob", sorted by source then descending prob.
  void save(const std::string& path) const;
  std::vector<std::string> to_lines() const;
  static TranslationTable load(const std::string& path);

  // Dense-id access used by the trainer and aligner.
  std::uint32_t source_id(std::string_view w) const;  // kUnknown if absent
  std::uint32_t target_id(std::string_view w) const;
  double prob_ids(std::uint32_t s, std::uint32_t t) const;
  static constexpr std::uint32_t kUnknown = UINT32_MAX;

 private:
  friend class Ibm1Trainer;
  static std::uint64_t key(std::uint32_t s, std::uint32_t t) {
    return (static_cast<std::uint64_t>(s) << 32) | t;
  }

  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::unordered_map<std::string, std::uint32_t> source_index_;
  std::unordered_map<std::string, std::uint32_t> target_index_;
  std::unordered_map<std::uint64_t, double> probs_;
  bool has_null_ = false;
};

struct Ibm1Result {
  TranslationTable table;
  // Corpus log-likelihood log p(target | source) before each EM iteration and
  // after the last one (iterations + 1 values).
  std::vector<double> log_likelihood;
};

// EM training of p(target | source) on a space-tokenized corpus.
// Throws DataError on an empty corpus. Results are bitwise identical for
// every config.threads value.
Ibm1Result train_ibm1(const ParallelCorpus& corpus, const AlignConfig& config);

// Swaps source and target of every pair (and the language codes).
ParallelCorpus reversed(const ParallelCorpus& corpus);

// `forward` models p(target | source), `reverse` p(source | target).
Alignment viterbi_align(const Tokens& source, const Tokens& target,
                        const TranslationTable& forward,
                        const TranslationTable& reverse, const AlignConfig& config);

struct AlignResult {
  TranslationTable forward;
  TranslationTable reverse;
  std::vector<Alignment> alignments;
};

AlignResult align_corpus(const ParallelCorpus& corpus, const AlignConfig& config);

}  // namespace mtprep

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtprep/corpus.h"

namespace mtprep {

inline constexpr std::string_view kEndOfWord = "</w>";
inline constexpr std::string_view kDefaultJoiner = "@@";
inline constexpr std::string_view kDefaultUnk = "<UNK>";

class BpeModel {
 public:
  using Merge = std::pair<std::string, std::string>;

  BpeModel() = default;
  BpeModel(std::vector<Merge> merges, std::string joiner = std::string(kDefaultJoiner));

  const std::vector<Merge>& merges() const { return merges_; }
  const std::string& joiner() const { return joiner_; }
  // Rank of a merge, or -1.
  long rank(std::string_view left, std::string_view right) const;

  // "#bpe v1 joiner=@@" then "left right" per merge.
  void save(const std::string& path) const;
  std::vector<std::string> to_lines() const;
  static BpeModel load(const std::string& path);

  bool operator==(const BpeModel& o) const {
    return merges_ == o.merges_ && joiner_ == o.joiner_;
  }

 private:
  std::vector<Merge> merges_;
  std::string joiner_ = std::string(kDefaultJoiner);
  std::unordered_map<std::string, long> ranks_;  // left + ' ' + right
};

// Word-type counts of whitespace-tokenized lines. Tokens that BPE never
// splits (placeholders, the unknown surface, factored tokens) are skipped.
std::vector<std::pair<std::string, std::uint64_t>> word_counts(
    const std::vector<std::string>& lines);

BpeModel train_bpe(const std::vector<std::pair<std::string, std::uint64_t>>& vocab,
                   std::size_t num_merges);
BpeModel train_bpe(const MonolingualCorpus& corpus, std::size_t num_merges);
// Joint model over both sides.
BpeModel train_bpe(const ParallelCorpus& corpus, std::size_t num_merges);

// True for tokens that pass through segmentation unchanged.
bool bpe_protected(std::string_view token);

Tokens apply_bpe(std::string_view token, const BpeModel& model);
Tokens apply_bpe(const Tokens& tokens, const BpeModel& model);
std::string apply_bpe_line(std::string_view line, const BpeModel& model);

// Each piece ending in the joiner loses it and is glued to its successor;
// a joiner-final piece at the very end is kept as is.
Tokens debpe(const Tokens& tokens, std::string_view joiner = kDefaultJoiner);
std::string debpe_line(std::string_view line, std::string_view joiner = kDefaultJoiner);

// Segments SRC, TERM-SRC and UNK surfaces, copying the factor to every
// piece. TERM-TGT annotation surfaces are left whole.
FactoredSentence apply_bpe(const FactoredSentence& sentence, const BpeModel& model);

}  // namespace mtprep

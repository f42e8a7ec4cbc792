#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtprep/corpus.h"
#include "mtprep/filtering.h"

namespace mtprep {

struct UnkConfig {
  std::size_t min_replacements = 1;
  std::size_t max_replacements = 3;
  std::size_t min_word_length = 3;
  std::uint64_t seed = 1;
  std::string unk_surface = "<UNK>";
  unsigned threads = 1;

  void validate() const;
};

// Letters and marks only, with ' or - allowed between letters.
bool is_alphabetic_word(std::string_view token);

// Links of `alignment` whose tokens are alphabetic, not placeholders and at
// least `min_word_length` code points long on both sides.
std::vector<Link> eligible_links(const Tokens& source, const Tokens& target,
                                 const Alignment& alignment,
                                 std::size_t min_word_length);

// Copy of the pair with the chosen links' tokens replaced by `unk` on both
// sides.
SentencePair replace_links(const Tokens& source, const Tokens& target,
                           const std::vector<Link>& chosen, std::string_view unk);

struct UnkResult {
  ParallelCorpus corpus;               // originals, then synthetic copies
  std::vector<Alignment> alignments;   // parallel to corpus
  std::size_t synthetic_count = 0;
};

// One synthetic copy per eligible pair, appended after the originals. The
// number of replaced links is uniform in [min, max] capped by availability,
// drawn from the per-pair stream (seed, pair index).
UnkResult gen_unknown_synthetic(const ParallelCorpus& corpus,
                                const std::vector<Alignment>& alignments,
                                const UnkConfig& config);

struct BtAssemblyConfig {
  FilterConfig filter;
  bool tag_source = false;
  std::string tag = "<BT>";
};

// Pairs translation i with original i, filters, then tags sources if asked.
FilterResult assemble_backtranslated(const MonolingualCorpus& mono,
                                     const MonolingualCorpus& translations,
                                     const BtAssemblyConfig& config);

ParallelCorpus merge_corpora(const std::vector<ParallelCorpus>& corpora);

}  // namespace mtprep

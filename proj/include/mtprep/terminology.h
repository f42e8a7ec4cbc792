#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtprep/corpus.h"

namespace mtprep {

struct StemmerConfig {
  // Suffixes per language; stem() tries them longest first.
  std::map<std::string, std::vector<std::string>> suffixes;
  std::size_t min_stem_length = 3;
  bool case_fold = true;

  void validate() const;
};

// Shipped nominal case-ending tables for uk, lv, lt and et.
StemmerConfig default_stemmer_config();

// Strips the longest listed suffix that leaves at least min_stem_length code
// points. Unknown languages only case-fold.
std::string stem(std::string_view word, std::string_view lang, const StemmerConfig& config);

struct GlossaryEntry {
  Tokens source_term;
  Tokens preferred_target;
  std::vector<Tokens> obsolete_targets;

  bool operator==(const GlossaryEntry&) const = default;
};

class Glossary {
 public:
  Glossary() = default;
  // Throws DataError when two entries share a stemmed source term.
  Glossary(std::vector<GlossaryEntry> entries, std::string source_lang,
           std::string target_lang, StemmerConfig stemmer = default_stemmer_config());

  const std::vector<GlossaryEntry>& entries() const { return entries_; }
  const std::string& source_lang() const { return source_lang_; }
  const std::string& target_lang() const { return target_lang_; }
  const StemmerConfig& stemmer() const { return stemmer_; }
  std::size_t max_term_length() const { return max_len_; }

  // Entry index for a stemmed token sequence joined by single spaces.
  const GlossaryEntry* find(const std::string& stem_key) const;

 private:
  std::vector<GlossaryEntry> entries_;
  std::string source_lang_;
  std::string target_lang_;
  StemmerConfig stemmer_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_len_ = 0;
};

// TSV: source_term TAB preferred_target [TAB obsolete1;obsolete2]. An empty
// or "-" third field means no obsolete variants. Blank lines are skipped.
Glossary load_glossary(const std::string& path, std::string source_lang,
                       std::string target_lang,
                       StemmerConfig stemmer = default_stemmer_config());
Glossary parse_glossary(const std::vector<std::string>& lines, std::string source_lang,
                        std::string target_lang,
                        StemmerConfig stemmer = default_stemmer_config(),
                        const std::string& name = "glossary");

// Opposite direction: preferred and obsolete target spellings become source
// terms mapped to the original source term.
Glossary reversed(const Glossary& glossary);

struct TermMatch {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  const GlossaryEntry* entry = nullptr;
};

// Greedy left to right, longest span first, over stemmed tokens.
std::vector<TermMatch> match_terms(const Tokens& tokens, const Glossary& glossary);

// Matched spans become TERM-SRC followed by the preferred target as TERM-TGT;
// everything else is SRC. Throws DataError on overlapping or unsorted spans.
FactoredSentence annotate_glossary(const Tokens& tokens, const std::vector<TermMatch>& matches);

// Source tokens linked one-to-one to an alphabetic target token of at least
// three code points.
std::vector<Link> tla_candidates(const Tokens& source, const Tokens& target,
                                 const Alignment& alignment);

// Annotates exactly the given links: source token as TERM-SRC, stemmed target
// token as TERM-TGT.
FactoredSentence annotate_links(const Tokens& source, const Tokens& target,
                                const std::vector<Link>& chosen,
                                std::string_view target_lang, const StemmerConfig& stemmer);

struct TlaConfig {
  double sample_rate = 1.0;
  std::uint64_t seed = 1;
  StemmerConfig stemmer = default_stemmer_config();
  unsigned threads = 1;

  void validate() const;
};

// Each candidate is kept with probability sample_rate, drawn from the
// per-pair stream (seed, index). Empty when nothing was selected.
FactoredSentence annotate_training(const Tokens& source, const Tokens& target,
                                   const Alignment& alignment, std::string_view target_lang,
                                   const TlaConfig& config, std::uint64_t index);

struct TlaCorpus {
  std::vector<FactoredSentence> source;  // originals (all SRC), then annotated copies
  std::vector<std::string> target;
  std::size_t annotated_count = 0;
};

TlaCorpus annotate_training_corpus(const ParallelCorpus& corpus,
                                   const std::vector<Alignment>& alignments,
                                   const TlaConfig& config);

// Drops TERM-TGT tokens and factors.
Tokens strip_annotations(const FactoredSentence& sentence);

}  // namespace mtprep

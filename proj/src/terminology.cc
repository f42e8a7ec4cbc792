#include "mtprep/terminology.h"

#include <algorithm>
#include <unordered_set>

#include "mtprep/augment.h"
#include "mtprep/error.h"
#include "mtprep/parallel.h"
#include "mtprep/rng.h"
#include "mtprep/textnorm.h"
#include "mtprep/utf8.h"

namespace mtprep {

void StemmerConfig::validate() const {
  if (min_stem_length < 1) throw ConfigError("min_stem_length must be >= 1");
  for (const auto& [lang, list] : suffixes)
    for (const auto& s : list)
      if (s.empty()) throw ConfigError("empty suffix in the '" + lang + "' table");
}

StemmerConfig default_stemmer_config() {
  StemmerConfig c;
  c.suffixes["uk"] = {
      "ього", "єва", "ева", "ова", "ому", "ого", "ими", "ами", "ями", "ові", "еві", "єві",
      "ою",   "ею",  "єю",  "ий",  "ій",  "ої",  "ів",  "ам",  "ям",  "ах",  "ях",  "ом",
      "ем",   "єм",  "а",   "я",   "у",   "ю",   "і",   "ї",   "е",   "є",   "о",   "и",
      "ь"};
  c.suffixes["lv"] = {"iem", "ām", "ēm", "īm", "ūm", "ās", "ēs", "īs", "us", "os", "am",
                      "em",  "im", "um", "as", "es", "is", "ai", "ei", "a",  "e",  "i",
                      "s",   "š",  "u",  "ā",  "ē",  "ī",  "ū",  "o"};
  c.suffixes["lt"] = {"iais", "iuose", "uose", "ams", "oms", "ems", "ose", "yje", "ėje",
                      "iai",  "ių",   "ai",   "as",  "is",  "ys",  "us",  "os",  "es",
                      "ui",   "ą",    "ę",    "į",   "ų",   "ė",   "a",   "e",   "i",
                      "o",    "u",    "y"};
  c.suffixes["et"] = {"desse", "dest", "dega", "sse", "ssa", "lle", "lla", "lt", "le",
                      "ks",    "ni",  "na",   "ta",  "ga",  "st",  "de",  "te", "d",
                      "s",     "t"};
  return c;
}

std::string stem(std::string_view word, std::string_view lang, const StemmerConfig& config) {
  std::string folded = config.case_fold ? utf8::lower(word) : std::string(word);
  auto it = config.suffixes.find(std::string(lang));
  if (it == config.suffixes.end()) return folded;

  std::vector<const std::string*> order;
  for (const auto& s : it->second) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const std::string* a, const std::string* b) {
    return utf8::length(*a) > utf8::length(*b);
  });
  const std::size_t len = utf8::length(folded);
  for (const auto* s : order) {
    if (!folded.ends_with(*s)) continue;
    if (len - utf8::length(*s) < config.min_stem_length) continue;
    folded.resize(folded.size() - s->size());
    return folded;
  }
  return folded;
}

// ---------------------------------------------------------------------------

namespace {

bool wordlike(std::string_view token) {
  for (std::size_t pos = 0; pos < token.size();)
    if (utf8::is_alnum(utf8::next(token, pos))) return true;
  return false;
}

std::string stem_key(const Tokens& tokens, std::size_t begin, std::size_t end,
                     std::string_view lang, const StemmerConfig& stemmer) {
  std::string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key.push_back(' ');
    key += stem(tokens[i], lang, stemmer);
  }
  return key;
}

}  // namespace

Glossary::Glossary(std::vector<GlossaryEntry> entries, std::string source_lang,
                   std::string target_lang, StemmerConfig stemmer)
    : entries_(std::move(entries)),
      source_lang_(std::move(source_lang)),
      target_lang_(std::move(target_lang)),
      stemmer_(std::move(stemmer)) {
  stemmer_.validate();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.source_term.empty() || e.preferred_target.empty())
      throw DataError("glossary entry " + std::to_string(i + 1) + " has an empty term");
    const auto key = stem_key(e.source_term, 0, e.source_term.size(), source_lang_, stemmer_);
    if (!index_.emplace(key, i).second)
      throw DataError("duplicate stemmed source term '" + key + "' (" +
                      join_tokens(e.source_term) + ")");
    max_len_ = std::max(max_len_, e.source_term.size());
  }
}

const GlossaryEntry* Glossary::find(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Glossary parse_glossary(const std::vector<std::string>& lines, std::string source_lang,
                        std::string target_lang, StemmerConfig stemmer,
                        const std::string& name) {
  std::vector<GlossaryEntry> entries;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (utf8::split_ws(line).empty()) continue;
    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    const auto where = name + ": line " + std::to_string(i + 1);
    if (fields.size() < 2 || fields.size() > 3)
      throw DataError(where + ": expected 2 or 3 tab-separated fields, got " +
                      std::to_string(fields.size()));
    GlossaryEntry e;
    e.source_term = tokenize(normalize(fields[0]));
    e.preferred_target = split_tokens(fields[1]);
    if (e.source_term.empty() || e.preferred_target.empty())
      throw DataError(where + ": empty source or target term");
    if (fields.size() == 3 && utf8::rstrip(fields[2]) != "-") {
      std::string_view rest = fields[2];
      for (std::size_t start = 0; start <= rest.size();) {
        auto semi = rest.find(';', start);
        auto variant = split_tokens(
            rest.substr(start, semi == std::string_view::npos ? semi : semi - start));
        if (!variant.empty() && !(variant.size() == 1 && variant[0] == "-"))
          e.obsolete_targets.push_back(std::move(variant));
        if (semi == std::string_view::npos) break;
        start = semi + 1;
      }
    }
    entries.push_back(std::move(e));
  }
  try {
    return Glossary(std::move(entries), std::move(source_lang), std::move(target_lang),
                    std::move(stemmer));
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  }
}

Glossary load_glossary(const std::string& path, std::string source_lang,
                       std::string target_lang, StemmerConfig stemmer) {
  return parse_glossary(read_lines(path), std::move(source_lang), std::move(target_lang),
                        std::move(stemmer), path);
}

Glossary reversed(const Glossary& glossary) {
  std::vector<GlossaryEntry> out;
  std::unordered_map<std::string, std::size_t> seen;
  auto add = [&](const Tokens& term, const GlossaryEntry& origin) {
    const auto key =
        stem_key(term, 0, term.size(), glossary.target_lang(), glossary.stemmer());
    auto [it, inserted] = seen.emplace(key, out.size());
    if (!inserted) {
      if (out[it->second].preferred_target != origin.source_term)
        throw DataError("reversed glossary: '" + join_tokens(term) +
                        "' maps to two different terms");
      return;
    }
    out.push_back({term, origin.source_term, {}});
  };
  for (const auto& e : glossary.entries()) {
    add(e.preferred_target, e);
    for (const auto& o : e.obsolete_targets) add(o, e);
  }
  return Glossary(std::move(out), glossary.target_lang(), glossary.source_lang(),
                  glossary.stemmer());
}

std::vector<TermMatch> match_terms(const Tokens& tokens, const Glossary& glossary) {
  std::vector<TermMatch> out;
  const std::size_t n = tokens.size();
  std::vector<std::string> stems(n);
  std::vector<bool> usable(n);
  for (std::size_t i = 0; i < n; ++i) {
    usable[i] = wordlike(tokens[i]);
    if (usable[i]) stems[i] = stem(tokens[i], glossary.source_lang(), glossary.stemmer());
  }
  for (std::size_t i = 0; i < n;) {
    bool found = false;
    const std::size_t longest = std::min(glossary.max_term_length(), n - i);
    for (std::size_t len = longest; len >= 1 && !found; --len) {
      std::string key;
      bool ok = true;
      for (std::size_t k = i; k < i + len && ok; ++k) {
        ok = usable[k];
        if (k > i) key.push_back(' ');
        key += stems[k];
      }
      if (!ok) continue;
      if (const auto* e = glossary.find(key)) {
        out.push_back({i, i + len, e});
        i += len;
        found = true;
      }
    }
    if (!found) ++i;
  }
  return out;
}

FactoredSentence annotate_glossary(const Tokens& tokens, const std::vector<TermMatch>& matches) {
  FactoredSentence out;
  std::size_t pos = 0;
  for (const auto& m : matches) {
    if (m.start < pos || m.end <= m.start || m.end > tokens.size() || !m.entry)
      throw DataError("overlapping or invalid term match [" + std::to_string(m.start) + "," +
                      std::to_string(m.end) + ")");
    for (; pos < m.start; ++pos) out.push_back({tokens[pos], Factor::Src});
    for (; pos < m.end; ++pos) out.push_back({tokens[pos], Factor::TermSrc});
    for (const auto& t : m.entry->preferred_target) out.push_back({t, Factor::TermTgt});
  }
  for (; pos < tokens.size(); ++pos) out.push_back({tokens[pos], Factor::Src});
  return out;
}

// ---------------------------------------------------------------------------

void TlaConfig::validate() const {
  if (!(sample_rate >= 0.0 && sample_rate <= 1.0))
    throw ConfigError("sample_rate must be in [0,1]");
  stemmer.validate();
}

std::vector<Link> tla_candidates(const Tokens& source, const Tokens& target,
                                 const Alignment& alignment) {
  check_alignment(alignment, source.size(), target.size());
  std::vector<std::uint32_t> src_deg(source.size(), 0), tgt_deg(target.size(), 0);
  for (const auto& l : alignment.links) {
    ++src_deg[l.src];
    ++tgt_deg[l.tgt];
  }
  std::vector<Link> out;
  for (const auto& l : alignment.links) {
    if (src_deg[l.src] != 1 || tgt_deg[l.tgt] != 1) continue;
    const auto& t = target[l.tgt];
    if (is_placeholder(source[l.src]) || !is_alphabetic_word(t) || utf8::length(t) < 3) continue;
    out.push_back(l);
  }
  return out;
}

FactoredSentence annotate_links(const Tokens& source, const Tokens& target,
                                const std::vector<Link>& chosen,
                                std::string_view target_lang, const StemmerConfig& stemmer) {
  std::vector<long> lemma_of(source.size(), -1);
  for (const auto& l : chosen) lemma_of.at(l.src) = l.tgt;
  FactoredSentence out;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (lemma_of[i] < 0) {
      out.push_back({source[i], Factor::Src});
      continue;
    }
    out.push_back({source[i], Factor::TermSrc});
    out.push_back({stem(target.at(lemma_of[i]), target_lang, stemmer), Factor::TermTgt});
  }
  return out;
}

FactoredSentence annotate_training(const Tokens& source, const Tokens& target,
                                   const Alignment& alignment, std::string_view target_lang,
                                   const TlaConfig& config, std::uint64_t index) {
  const auto candidates = tla_candidates(source, target, alignment);
  if (candidates.empty() || config.sample_rate <= 0.0) return {};
  Rng rng = Rng::stream(config.seed, index);
  std::vector<Link> chosen;
  for (const auto& l : candidates)
    if (rng.uniform() < config.sample_rate) chosen.push_back(l);
  if (chosen.empty()) return {};
  return annotate_links(source, target, chosen, target_lang, config.stemmer);
}

TlaCorpus annotate_training_corpus(const ParallelCorpus& corpus,
                                   const std::vector<Alignment>& alignments,
                                   const TlaConfig& config) {
  config.validate();
  if (alignments.size() != corpus.size())
    throw DataError("alignment count " + std::to_string(alignments.size()) +
                    " does not match corpus size " + std::to_string(corpus.size()));
  const std::size_t n = corpus.size();
  std::vector<FactoredSentence> copies(n);
  for_each_block(n, 1024, config.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      copies[i] = annotate_training(split_tokens(corpus.pairs[i].source),
                                    split_tokens(corpus.pairs[i].target), alignments[i],
                                    corpus.target_lang, config, i);
  });

  TlaCorpus out;
  out.source.reserve(2 * n);
  out.target.reserve(2 * n);
  for (const auto& p : corpus.pairs) {
    FactoredSentence s;
    for (auto& t : split_tokens(p.source)) s.push_back({std::move(t), Factor::Src});
    out.source.push_back(std::move(s));
    out.target.push_back(p.target);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (copies[i].empty()) continue;
    out.source.push_back(std::move(copies[i]));
    out.target.push_back(corpus.pairs[i].target);
    ++out.annotated_count;
  }
  return out;
}

Tokens strip_annotations(const FactoredSentence& sentence) {
  Tokens out;
  for (const auto& t : sentence)
    if (t.factor != Factor::TermTgt) out.push_back(t.surface);
  return out;
}

}  // namespace mtprep

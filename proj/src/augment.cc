#include "mtprep/augment.h"

#include <optional>

#include "mtprep/error.h"
#include "mtprep/parallel.h"
#include "mtprep/rng.h"
#include "mtprep/textnorm.h"
#include "mtprep/utf8.h"

namespace mtprep {

void UnkConfig::validate() const {
  if (min_replacements < 1 || max_replacements < min_replacements)
    throw ConfigError("replacement range must satisfy 1 <= min <= max");
  if (unk_surface.empty()) throw ConfigError("unk surface must not be empty");
}

bool is_alphabetic_word(std::string_view token) {
  const auto cps = utf8::decode(token);
  if (cps.empty()) return false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (utf8::is_letter(c)) continue;
    if (utf8::is_mark(c) && i > 0) continue;
    if ((c == U'\'' || c == U'-') && i > 0 && i + 1 < cps.size() &&
        utf8::is_letter(cps[i - 1]) && utf8::is_letter(cps[i + 1]))
      continue;
    return false;
  }
  return true;
}

namespace {

bool content_word(const std::string& token, std::size_t min_len) {
  return !is_placeholder(token) && utf8::length(token) >= min_len &&
         is_alphabetic_word(token);
}

}  // namespace

std::vector<Link> eligible_links(const Tokens& source, const Tokens& target,
                                 const Alignment& alignment,
                                 std::size_t min_word_length) {
  check_alignment(alignment, source.size(), target.size());
  std::vector<Link> out;
  for (const auto& l : alignment.links)
    if (content_word(source[l.src], min_word_length) &&
        content_word(target[l.tgt], min_word_length))
      out.push_back(l);
  return out;
}

SentencePair replace_links(const Tokens& source, const Tokens& target,
                           const std::vector<Link>& chosen, std::string_view unk) {
  Tokens s = source, t = target;
  for (const auto& l : chosen) {
    s.at(l.src) = unk;
    t.at(l.tgt) = unk;
  }
  return {join_tokens(s), join_tokens(t)};
}

UnkResult gen_unknown_synthetic(const ParallelCorpus& corpus,
                                const std::vector<Alignment>& alignments,
                                const UnkConfig& config) {
  config.validate();
  if (alignments.size() != corpus.size())
    throw DataError("alignment count " + std::to_string(alignments.size()) +
                    " does not match corpus size " + std::to_string(corpus.size()));

  const std::size_t n = corpus.size();
  std::vector<std::optional<SentencePair>> copies(n);
  for_each_block(n, 1024, config.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Tokens src = split_tokens(corpus.pairs[i].source);
      const Tokens tgt = split_tokens(corpus.pairs[i].target);
      auto links = eligible_links(src, tgt, alignments[i], config.min_word_length);
      if (links.empty()) continue;
      Rng rng = Rng::stream(config.seed, i);
      const std::size_t span = config.max_replacements - config.min_replacements + 1;
      const std::size_t k = std::min(links.size(), config.min_replacements +
                                                       static_cast<std::size_t>(rng.below(span)));
      // Partial Fisher-Yates: the first k entries become a uniform sample.
      for (std::size_t j = 0; j < k; ++j)
        std::swap(links[j], links[j + rng.below(links.size() - j)]);
      links.resize(k);
      copies[i] = replace_links(src, tgt, links, config.unk_surface);
    }
  });

  UnkResult result;
  result.corpus = corpus;
  result.alignments = alignments;
  for (std::size_t i = 0; i < n; ++i) {
    if (!copies[i]) continue;
    result.corpus.pairs.push_back(std::move(*copies[i]));
    result.alignments.push_back(alignments[i]);
    ++result.synthetic_count;
  }
  return result;
}

FilterResult assemble_backtranslated(const MonolingualCorpus& mono,
                                     const MonolingualCorpus& translations,
                                     const BtAssemblyConfig& config) {
  if (mono.size() != translations.size())
    throw DataError("back-translation has " + std::to_string(translations.size()) +
                    " lines, monolingual originals have " + std::to_string(mono.size()));
  ParallelCorpus raw{translations.lang, mono.lang, {}};
  raw.pairs.reserve(mono.size());
  for (std::size_t i = 0; i < mono.size(); ++i)
    raw.pairs.push_back({translations.lines[i], mono.lines[i]});
  auto result = filter_corpus(raw, config.filter);
  if (config.tag_source)
    for (auto& p : result.kept.pairs) p.source = config.tag + " " + p.source;
  return result;
}

ParallelCorpus merge_corpora(const std::vector<ParallelCorpus>& corpora) {
  if (corpora.empty()) throw DataError("no corpora to merge");
  ParallelCorpus out{corpora[0].source_lang, corpora[0].target_lang, {}};
  std::size_t total = 0;
  for (const auto& c : corpora) {
    if (c.source_lang != out.source_lang || c.target_lang != out.target_lang)
      throw DataError("cannot merge " + c.source_lang + "-" + c.target_lang + " into " +
                      out.source_lang + "-" + out.target_lang);
    total += c.size();
  }
  out.pairs.reserve(total);
  for (const auto& c : corpora) out.pairs.insert(out.pairs.end(), c.pairs.begin(), c.pairs.end());
  return out;
}

}  // namespace mtprep

#include "mtprep/align.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "mtprep/error.h"
#include "mtprep/parallel.h"

namespace mtprep {

Symmetrize parse_symmetrize(std::string_view name) {
  if (name == "intersection") return Symmetrize::Intersection;
  if (name == "union") return Symmetrize::Union;
  if (name == "source-to-target") return Symmetrize::SourceToTarget;
  throw ConfigError("unknown symmetrization '" + std::string(name) + "'");
}

std::string_view symmetrize_name(Symmetrize s) {
  switch (s) {
    case Symmetrize::Intersection: return "intersection";
    case Symmetrize::Union: return "union";
    case Symmetrize::SourceToTarget: return "source-to-target";
  }
  return "intersection";
}

void AlignConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
}

std::uint32_t TranslationTable::source_id(std::string_view w) const {
  auto it = source_index_.find(std::string(w));
  return it == source_index_.end() ? kUnknown : it->second;
}

std::uint32_t TranslationTable::target_id(std::string_view w) const {
  auto it = target_index_.find(std::string(w));
  return it == target_index_.end() ? kUnknown : it->second;
}

double TranslationTable::prob_ids(std::uint32_t s, std::uint32_t t) const {
  if (s == kUnknown || t == kUnknown) return 0.0;
  auto it = probs_.find(key(s, t));
  return it == probs_.end() ? 0.0 : it->second;
}

double TranslationTable::prob(std::string_view source, std::string_view target) const {
  return prob_ids(source_id(source), target_id(target));
}

double TranslationTable::row_sum(std::string_view source) const {
  const std::uint32_t s = source_id(source);
  if (s == kUnknown) return 0.0;
  // Sum in target-id order so the result does not depend on hash layout.
  std::vector<std::pair<std::uint32_t, double>> row;
  for (const auto& [k, p] : probs_)
    if ((k >> 32) == s) row.emplace_back(static_cast<std::uint32_t>(k), p);
  std::sort(row.begin(), row.end());
  double sum = 0.0;
  for (const auto& [_, p] : row) sum += p;
  return sum;
}

namespace {

std::string format_prob(double p) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, end);
}

}  // namespace

std::vector<std::string> TranslationTable::to_lines() const {
  struct Row {
    const std::string* source;
    const std::string* target;
    double prob;
  };
  std::vector<Row> rows;
  rows.reserve(probs_.size());
  for (const auto& [k, p] : probs_)
    rows.push_back({&source_words_[k >> 32], &target_words_[k & 0xFFFFFFFFu], p});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (*a.source != *b.source) return *a.source < *b.source;
    if (a.prob != b.prob) return a.prob > b.prob;
    return *a.target < *b.target;
  });
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const auto& r : rows) lines.push_back(*r.source + "\t" + *r.target + "\t" + format_prob(r.prob));
  return lines;
}

void TranslationTable::save(const std::string& path) const { write_lines(path, to_lines()); }

TranslationTable TranslationTable::load(const std::string& path) {
  TranslationTable table;
  auto lines = read_lines(path);
  auto intern = [](std::vector<std::string>& words,
                   std::unordered_map<std::string, std::uint32_t>& index,
                   const std::string& w) {
    auto [it, inserted] = index.emplace(w, static_cast<std::uint32_t>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw DataError(path + ": malformed table record at line " + std::to_string(i + 1));
    double p = 0;
    const char* first = line.data() + t2 + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, p);
    if (ec != std::errc() || ptr != last)
      throw DataError(path + ": bad probability at line " + std::to_string(i + 1));
    const std::string source = line.substr(0, t1);
    const auto s = intern(table.source_words_, table.source_index_, source);
    const auto t = intern(table.target_words_, table.target_index_,
                          line.substr(t1 + 1, t2 - t1 - 1));
    table.probs_[key(s, t)] = p;
    if (source == kNull) table.has_null_ = true;
  }
  return table;
}

// ---------------------------------------------------------------------------

class Ibm1Trainer {
 public:
  Ibm1Trainer(const ParallelCorpus& corpus, const AlignConfig& config)
      : config_(config) {
    if (config_.use_null) intern_source(std::string(TranslationTable::kNull));
    src_.reserve(corpus.size());
    tgt_.reserve(corpus.size());
    for (const auto& pair : corpus.pairs) {
      std::vector<std::uint32_t> s, t;
      if (config_.use_null) s.push_back(0);
      for (const auto& w : split_tokens(pair.source)) s.push_back(intern_source(w));
      for (const auto& w : split_tokens(pair.target)) t.push_back(intern_target(w));
      for (auto si : s)
        for (auto ti : t) {
          auto [it, inserted] = entry_of_.emplace(TranslationTable::key(si, ti),
                                                  static_cast<std::uint32_t>(entry_src_.size()));
          if (inserted) entry_src_.push_back(si);
        }
      src_.push_back(std::move(s));
      tgt_.push_back(std::move(t));
    }
    // Uniform start over co-occurring targets.
    std::vector<std::uint32_t> row_size(table_.source_words_.size(), 0);
    for (auto s : entry_src_) ++row_size[s];
    prob_.resize(entry_src_.size());
    for (std::size_t e = 0; e < prob_.size(); ++e) prob_[e] = 1.0 / row_size[entry_src_[e]];
  }

  Ibm1Result run() {
    Ibm1Result result;
    for (unsigned it = 0; it < config_.iterations; ++it) {
      std::vector<double> counts(prob_.size(), 0.0);
      result.log_likelihood.push_back(expectation(&counts));
      maximization(counts);
    }
    result.log_likelihood.push_back(expectation(nullptr));
    for (const auto& [k, e] : entry_of_) table_.probs_[k] = prob_[e];
    table_.has_null_ = config_.use_null;
    result.table = std::move(table_);
    return result;
  }

 private:
  static constexpr std::size_t kBlock = 512;

  std::uint32_t intern_source(const std::string& w) {
    auto [it, inserted] = table_.source_index_.emplace(
        w, static_cast<std::uint32_t>(table_.source_words_.size()));
    if (inserted) table_.source_words_.push_back(w);
    return it->second;
  }
  std::uint32_t intern_target(const std::string& w) {
    auto [it, inserted] = table_.target_index_.emplace(
        w, static_cast<std::uint32_t>(table_.target_words_.size()));
    if (inserted) table_.target_words_.push_back(w);
    return it->second;
  }

  std::uint32_t entry(std::uint32_t s, std::uint32_t t) const {
    return entry_of_.at(TranslationTable::key(s, t));
  }

  // Accumulates expected counts into `counts` (when non-null) and returns the
  // log-likelihood under the current parameters. Blocks emit their
  // contributions as (entry, value) lists that are folded in block order, so
  // the additions happen in exactly the sequential order.
  double expectation(std::vector<double>* counts) {
    const std::size_t n = src_.size();
    const std::size_t blocks = block_count(n, kBlock);
    const std::size_t wave = std::max<std::size_t>(config_.threads, 1) * 2;
    double ll = 0.0;
    for (std::size_t w0 = 0; w0 < blocks; w0 += wave) {
      const std::size_t w1 = std::min(blocks, w0 + wave);
      std::vector<std::vector<std::pair<std::uint32_t, double>>> contrib(w1 - w0);
      std::vector<double> block_ll(w1 - w0, 0.0);
      const std::size_t begin = w0 * kBlock;
      const std::size_t end = std::min(n, w1 * kBlock);
      for_each_block(end - begin, kBlock, config_.threads,
                     [&](std::size_t b, std::size_t lo, std::size_t hi) {
                       auto& out = contrib[b];
                       double local_ll = 0.0;
                       std::vector<std::uint32_t> ids;
                       for (std::size_t i = begin + lo; i < begin + hi; ++i) {
                         const auto& s = src_[i];
                         if (s.empty()) continue;
                         const double log_len = std::log(static_cast<double>(s.size()));
                         for (auto t : tgt_[i]) {
                           ids.clear();
                           double denom = 0.0;
                           for (auto si : s) {
                             ids.push_back(entry(si, t));
                             denom += prob_[ids.back()];
                           }
                           if (denom <= 0.0) continue;
                           local_ll += std::log(denom) - log_len;
                           if (counts)
                             for (auto e : ids) out.emplace_back(e, prob_[e] / denom);
                         }
                       }
                       block_ll[b] = local_ll;
                     });
      for (std::size_t b = 0; b < contrib.size(); ++b) {
        ll += block_ll[b];
        if (counts)
          for (const auto& [e, v] : contrib[b]) (*counts)[e] += v;
      }
    }
    return ll;
  }

  void maximization(const std::vector<double>& counts) {
    std::vector<double> total(table_.source_words_.size(), 0.0);
    for (std::size_t e = 0; e < counts.size(); ++e) total[entry_src_[e]] += counts[e];
    for (std::size_t e = 0; e < counts.size(); ++e) {
      const double z = total[entry_src_[e]];
      if (z > 0.0) prob_[e] = counts[e] / z;
    }
  }

  AlignConfig config_;
  TranslationTable table_;
  std::vector<std::vector<std::uint32_t>> src_;
  std::vector<std::vector<std::uint32_t>> tgt_;
  std::unordered_map<std::uint64_t, std::uint32_t> entry_of_;
  std::vector<std::uint32_t> entry_src_;
  std::vector<double> prob_;
};

Ibm1Result train_ibm1(const ParallelCorpus& corpus, const AlignConfig& config) {
  config.validate();
  if (corpus.pairs.empty()) throw DataError("cannot train IBM Model 1 on an empty corpus");
  return Ibm1Trainer(corpus, config).run();
}

ParallelCorpus reversed(const ParallelCorpus& corpus) {
  ParallelCorpus out{corpus.target_lang, corpus.source_lang, {}};
  out.pairs.reserve(corpus.size());
  for (const auto& p : corpus.pairs) out.pairs.push_back({p.target, p.source});
  return out;
}

namespace {

// For every token of `to`, the index in `from` with the highest probability,
// or -1 when NULL wins. Ties keep the earliest candidate, NULL first.
std::vector<long> best_links(const Tokens& from, const Tokens& to,
                             const TranslationTable& table, bool use_null) {
  std::vector<std::uint32_t> from_ids;
  from_ids.reserve(from.size());
  for (const auto& w : from) from_ids.push_back(table.source_id(w));
  const std::uint32_t null_id =
      use_null ? table.source_id(TranslationTable::kNull) : TranslationTable::kUnknown;

  std::vector<long> best(to.size(), -1);
  for (std::size_t j = 0; j < to.size(); ++j) {
    const std::uint32_t t = table.target_id(to[j]);
    long arg = -1;
    double top = 0.0;
    if (use_null) {
      top = table.prob_ids(null_id, t);
    } else if (!from.empty()) {
      arg = 0;
      top = table.prob_ids(from_ids[0], t);
    }
    for (std::size_t i = use_null ? 0 : 1; i < from.size(); ++i) {
      const double p = table.prob_ids(from_ids[i], t);
      if (p > top) {
        top = p;
        arg = static_cast<long>(i);
      }
    }
    best[j] = arg;
  }
  return best;
}

}  // namespace

Alignment viterbi_align(const Tokens& source, const Tokens& target,
                        const TranslationTable& forward,
                        const TranslationTable& reverse, const AlignConfig& config) {
  if (source.empty() || target.empty()) return {};
  std::vector<Link> fwd, rev;
  const auto f = best_links(source, target, forward, config.use_null);
  for (std::size_t j = 0; j < f.size(); ++j)
    if (f[j] >= 0) fwd.push_back({static_cast<std::uint32_t>(f[j]), static_cast<std::uint32_t>(j)});
  if (config.symmetrize == Symmetrize::SourceToTarget) return Alignment(std::move(fwd));

  const auto r = best_links(target, source, reverse, config.use_null);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= 0) rev.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(r[i])});

  Alignment a(std::move(fwd));
  Alignment b(std::move(rev));
  std::vector<Link> out;
  if (config.symmetrize == Symmetrize::Intersection) {
    std::set_intersection(a.links.begin(), a.links.end(), b.links.begin(), b.links.end(),
                          std::back_inserter(out));
  } else {
    std::set_union(a.links.begin(), a.links.end(), b.links.begin(), b.links.end(),
                   std::back_inserter(out));
  }
  return Alignment(std::move(out));
}

AlignResult align_corpus(const ParallelCorpus& corpus, const AlignConfig& config) {
  AlignResult result;
  result.forward = train_ibm1(corpus, config).table;
  result.reverse = train_ibm1(reversed(corpus), config).table;
  result.alignments.resize(corpus.size());
  for_each_block(corpus.size(), 1024, config.threads,
                 [&](std::size_t, std::size_t b, std::size_t e) {
                   for (std::size_t i = b; i < e; ++i)
                     result.alignments[i] = viterbi_align(
                         split_tokens(corpus.pairs[i].source),
                         split_tokens(corpus.pairs[i].target), result.forward,
                         result.reverse, config);
                 });
  return result;
}

}  // namespace mtprep

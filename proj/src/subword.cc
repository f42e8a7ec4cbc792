#include "mtprep/subword.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "mtprep/error.h"
#include "mtprep/textnorm.h"
#include "mtprep/utf8.h"

namespace mtprep {

namespace {

std::string merge_key(std::string_view l, std::string_view r) {
  std::string k;
  k.reserve(l.size() + r.size() + 1);
  k += l;
  k.push_back(' ');
  k += r;
  return k;
}

constexpr std::string_view kHeaderPrefix = "#bpe v1 joiner=";

}  // namespace

BpeModel::BpeModel(std::vector<Merge> merges, std::string joiner)
    : merges_(std::move(merges)), joiner_(std::move(joiner)) {
  if (joiner_.empty()) throw ConfigError("BPE joiner must not be empty");
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const auto& [l, r] = merges_[i];
    if (l.empty() || r.empty()) throw DataError("empty BPE merge symbol");
    if (!ranks_.emplace(merge_key(l, r), static_cast<long>(i)).second)
      throw DataError("duplicate BPE merge '" + l + " " + r + "'");
  }
}

long BpeModel::rank(std::string_view left, std::string_view right) const {
  auto it = ranks_.find(merge_key(left, right));
  return it == ranks_.end() ? -1 : it->second;
}

std::vector<std::string> BpeModel::to_lines() const {
  std::vector<std::string> lines;
  lines.reserve(merges_.size() + 1);
  lines.push_back(std::string(kHeaderPrefix) + joiner_);
  for (const auto& [l, r] : merges_) lines.push_back(merge_key(l, r));
  return lines;
}

void BpeModel::save(const std::string& path) const { write_lines(path, to_lines()); }

BpeModel BpeModel::load(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty() || !lines[0].starts_with(kHeaderPrefix))
    throw DataError(path + ": missing '#bpe v1' header");
  std::string joiner = lines[0].substr(kHeaderPrefix.size());
  std::vector<Merge> merges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto parts = utf8::split_ws(lines[i]);
    if (parts.size() != 2)
      throw DataError(path + ": malformed merge at line " + std::to_string(i + 1));
    merges.emplace_back(std::string(parts[0]), std::string(parts[1]));
  }
  return BpeModel(std::move(merges), std::move(joiner));
}

bool bpe_protected(std::string_view token) {
  return token == kDefaultUnk || is_placeholder(token) ||
         token.find(kFactorSeparator) != std::string_view::npos;
}

std::vector<std::pair<std::string, std::uint64_t>> word_counts(
    const std::vector<std::string>& lines) {
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (const auto& line : lines)
    for (auto tok : utf8::split_ws(line)) {
      if (bpe_protected(tok)) continue;
      auto it = counts.find(tok);
      if (it == counts.end()) {
        counts.emplace(std::string(tok), 1);
      } else {
        ++it->second;
      }
    }
  return {counts.begin(), counts.end()};
}

// ---------------------------------------------------------------------------

namespace {

class BpeTrainer {
 public:
  explicit BpeTrainer(const std::vector<std::pair<std::string, std::uint64_t>>& vocab) {
    words_.reserve(vocab.size());
    freq_.reserve(vocab.size());
    for (const auto& [word, f] : vocab) {
      std::vector<std::uint32_t> syms;
      auto cps = utf8::decode(word);
      for (std::size_t i = 0; i < cps.size(); ++i) {
        std::string s = utf8::encode(cps[i]);
        if (i + 1 == cps.size()) s += kEndOfWord;
        syms.push_back(intern(s));
      }
      if (syms.empty()) continue;
      freq_.push_back(static_cast<std::int64_t>(f));
      words_.push_back(std::move(syms));
    }
    std::unordered_map<std::uint64_t, std::int64_t> delta;
    for (std::uint32_t w = 0; w < words_.size(); ++w) account(w, +1, delta);
    apply(delta);
  }

  std::vector<BpeModel::Merge> run(std::size_t num_merges) {
    std::vector<BpeModel::Merge> merges;
    while (merges.size() < num_merges && !queue_.empty()) {
      const Entry best = *queue_.begin();
      if (best.count < 2) break;
      merges.emplace_back(symbols_[best.left], symbols_[best.right]);
      merge(best.left, best.right);
    }
    return merges;
  }

 private:
  struct Entry {
    std::int64_t count;
    std::uint32_t left, right;
  };
  struct Order {
    const std::vector<std::string>* symbols;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.count != b.count) return a.count > b.count;
      const auto& sa = *symbols;
      if (a.left != b.left) return sa[a.left] < sa[b.left];
      return sa[a.right] < sa[b.right];
    }
  };

  static std::uint64_t pair_key(std::uint32_t l, std::uint32_t r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }

  std::uint32_t intern(const std::string& s) {
    auto [it, inserted] = ids_.emplace(s, static_cast<std::uint32_t>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  }

  void account(std::uint32_t w, int sign,
               std::unordered_map<std::uint64_t, std::int64_t>& delta) {
    const auto& syms = words_[w];
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const auto k = pair_key(syms[i], syms[i + 1]);
      delta[k] += sign * freq_[w];
      if (sign > 0) where_[k].push_back(w);
    }
  }

  void apply(const std::unordered_map<std::uint64_t, std::int64_t>& delta) {
    for (const auto& [k, d] : delta) {
      if (d == 0) continue;
      const auto l = static_cast<std::uint32_t>(k >> 32);
      const auto r = static_cast<std::uint32_t>(k);
      auto& c = counts_[k];
      if (c > 0) queue_.erase(Entry{c, l, r});
      c += d;
      if (c > 0) {
        queue_.insert(Entry{c, l, r});
      } else {
        counts_.erase(k);
        where_.erase(k);
      }
    }
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    const std::uint32_t joined = intern(symbols_[a] + symbols_[b]);
    const auto key = pair_key(a, b);
    std::vector<std::uint32_t> candidates = std::move(where_[key]);
    where_.erase(key);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::unordered_map<std::uint64_t, std::int64_t> delta;
    for (auto w : candidates) {
      auto& syms = words_[w];
      bool present = false;
      for (std::size_t i = 0; i + 1 < syms.size() && !present; ++i)
        present = syms[i] == a && syms[i + 1] == b;
      if (!present) continue;
      account(w, -1, delta);
      std::vector<std::uint32_t> out;
      out.reserve(syms.size());
      for (std::size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b) {
          out.push_back(joined);
          i += 2;
        } else {
          out.push_back(syms[i++]);
        }
      }
      syms = std::move(out);
      account(w, +1, delta);
    }
    apply(delta);
  }

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::vector<std::uint32_t>> words_;
  std::vector<std::int64_t> freq_;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> where_;
  std::set<Entry, Order> queue_{Order{&symbols_}};
};

}  // namespace

BpeModel train_bpe(const std::vector<std::pair<std::string, std::uint64_t>>& vocab,
                   std::size_t num_merges) {
  return BpeModel(BpeTrainer(vocab).run(num_merges));
}

BpeModel train_bpe(const MonolingualCorpus& corpus, std::size_t num_merges) {
  return train_bpe(word_counts(corpus.lines), num_merges);
}

BpeModel train_bpe(const ParallelCorpus& corpus, std::size_t num_merges) {
  std::vector<std::string> lines;
  lines.reserve(corpus.size() * 2);
  for (const auto& p : corpus.pairs) {
    lines.push_back(p.source);
    lines.push_back(p.target);
  }
  return train_bpe(word_counts(lines), num_merges);
}

// ---------------------------------------------------------------------------

Tokens apply_bpe(std::string_view token, const BpeModel& model) {
  if (token.empty()) return {};
  if (bpe_protected(token)) return {std::string(token)};
  std::vector<std::string> syms;
  const auto cps = utf8::decode(token);
  for (auto c : cps) syms.push_back(utf8::encode(c));
  syms.back() += kEndOfWord;

  while (syms.size() > 1) {
    long best = -1;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const long r = model.rank(syms[i], syms[i + 1]);
      if (r >= 0 && (best < 0 || r < best)) best = r;
    }
    if (best < 0) break;
    const auto& [a, b] = model.merges()[static_cast<std::size_t>(best)];
    std::vector<std::string> out;
    out.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b) {
        out.push_back(syms[i] + syms[i + 1]);
        i += 2;
      } else {
        out.push_back(std::move(syms[i++]));
      }
    }
    syms = std::move(out);
  }

  syms.back().resize(syms.back().size() - kEndOfWord.size());
  // A final piece ending in the joiner would read as a continuation; split
  // off its last code point so debpe stays an exact inverse.
  const std::string& joiner = model.joiner();
  if (syms.back().size() > joiner.size() && syms.back().ends_with(joiner)) {
    auto last = utf8::decode(syms.back());
    const auto tail = utf8::encode(last.back());
    last.pop_back();
    syms.back() = utf8::encode(last);
    syms.push_back(tail);
  }
  for (std::size_t i = 0; i + 1 < syms.size(); ++i) syms[i] += joiner;
  return syms;
}

Tokens apply_bpe(const Tokens& tokens, const BpeModel& model) {
  Tokens out;
  out.reserve(tokens.size() * 2);
  for (const auto& t : tokens)
    for (auto& piece : apply_bpe(t, model)) out.push_back(std::move(piece));
  return out;
}

std::string apply_bpe_line(std::string_view line, const BpeModel& model) {
  return join_tokens(apply_bpe(split_tokens(line), model));
}

Tokens debpe(const Tokens& tokens, std::string_view joiner) {
  Tokens out;
  std::string pending;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (i + 1 < tokens.size() && t.size() > joiner.size() && t.ends_with(joiner)) {
      pending.append(t, 0, t.size() - joiner.size());
      continue;
    }
    pending += t;
    out.push_back(std::move(pending));
    pending.clear();
  }
  return out;
}

std::string debpe_line(std::string_view line, std::string_view joiner) {
  return join_tokens(debpe(split_tokens(line), joiner));
}

FactoredSentence apply_bpe(const FactoredSentence& sentence, const BpeModel& model) {
  FactoredSentence out;
  out.reserve(sentence.size() * 2);
  for (const auto& tok : sentence) {
    if (tok.factor == Factor::TermTgt) {
      out.push_back(tok);
      continue;
    }
    for (auto& piece : apply_bpe(tok.surface, model))
      out.push_back({std::move(piece), tok.factor});
  }
  return out;
}

}  // namespace mtprep

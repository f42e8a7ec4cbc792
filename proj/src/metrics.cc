#include "mtprep/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "mtprep/error.h"
#include "mtprep/parallel.h"
#include "mtprep/rng.h"
#include "mtprep/utf8.h"

namespace mtprep {

Metric parse_metric(std::string_view name) {
  if (name == "chrf") return Metric::Chrf;
  if (name == "bleu") return Metric::Bleu;
  if (name == "ter") return Metric::Ter;
  throw ConfigError("unknown metric '" + std::string(name) + "' (chrf, bleu, ter)");
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Chrf: return "chrf";
    case Metric::Bleu: return "bleu";
    case Metric::Ter: return "ter";
  }
  return "chrf";
}

bool higher_is_better(Metric m) { return m != Metric::Ter; }

std::string signature(Metric m) {
  const std::string version = "version:" MTPREP_VERSION;
  switch (m) {
    case Metric::Chrf: return "nrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|" + version;
    case Metric::Bleu: return "nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp|" + version;
    case Metric::Ter:
      return "nrefs:1|case:lc|tok:tercom|norm:no|punct:yes|asian:no|" + version;
  }
  return version;
}

namespace {

constexpr int kCharOrder = 6;
constexpr int kBleuOrder = 4;
constexpr double kBeta = 2.0;

std::string join_ws(std::string_view s) {
  std::string out;
  for (auto piece : utf8::split_ws(s)) {
    if (!out.empty()) out.push_back(' ');
    out += piece;
  }
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t pos = 0;
  for (std::size_t hit; (hit = s.find(from, pos)) != std::string::npos; pos = hit + from.size()) {
    out.append(s, pos, hit - pos);
    out += to;
  }
  out.append(s, pos);
  s = std::move(out);
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool punct_13a(char32_t c) {
  return (c >= 0x7B && c <= 0x7E) || (c >= 0x5B && c <= 0x60) || (c >= 0x20 && c <= 0x26) ||
         (c >= 0x28 && c <= 0x2B) || (c >= 0x3A && c <= 0x40) || c == U'/';
}

}  // namespace

std::string tokenize_13a(std::string_view line) {
  std::string s(line);
  replace_all(s, "<skipped>", "");
  replace_all(s, "-\n", "");
  replace_all(s, "\n", " ");
  if (s.find('&') != std::string::npos) {
    replace_all(s, "&quot;", "\"");
    replace_all(s, "&amp;", "&");
    replace_all(s, "&lt;", "<");
    replace_all(s, "&gt;", ">");
  }
  const std::u32string in = utf8::decode(" " + s + " ");

  // The four substitution passes, each a left-to-right non-overlapping scan.
  std::u32string a;
  for (char32_t c : in) {
    if (punct_13a(c)) {
      a += U' ';
      a += c;
      a += U' ';
    } else {
      a += c;
    }
  }
  auto dot_comma = [](char32_t c) { return c == U'.' || c == U','; };
  std::u32string b;
  for (std::size_t i = 0; i < a.size();) {
    if (i + 1 < a.size() && !is_ascii_digit(a[i]) && dot_comma(a[i + 1])) {
      b += a[i];
      b += U' ';
      b += a[i + 1];
      b += U' ';
      i += 2;
    } else {
      b += a[i++];
    }
  }
  std::u32string c;
  for (std::size_t i = 0; i < b.size();) {
    if (i + 1 < b.size() && dot_comma(b[i]) && !is_ascii_digit(b[i + 1])) {
      c += U' ';
      c += b[i];
      c += U' ';
      c += b[i + 1];
      i += 2;
    } else {
      c += b[i++];
    }
  }
  std::u32string d;
  for (std::size_t i = 0; i < c.size();) {
    if (i + 1 < c.size() && is_ascii_digit(c[i]) && c[i + 1] == U'-') {
      d += c[i];
      d += U' ';
      d += U'-';
      d += U' ';
      i += 2;
    } else {
      d += c[i++];
    }
  }
  return join_ws(utf8::encode(d));
}

std::string tokenize_tercom(std::string_view line) {
  if (line.empty()) return "";
  return join_ws(utf8::lower(line));
}

// ---------------------------------------------------------------------------
// TER

namespace {

constexpr long kMaxShiftSize = 10;
constexpr long kMaxShiftDist = 50;
constexpr long kBeamWidth = 25;
constexpr long kMaxShiftCandidates = 1000;
constexpr long kInfinity = 10000000000000000L;

using Words = std::vector<std::uint32_t>;

struct Cell {
  long cost;
  char op;
};

// Beam-restricted edit distance with operation trace, rows over the
// hypothesis. 'd' consumes a hypothesis word, 'i' a reference word.
std::pair<long, std::string> beam_edit_distance(const Words& h, const Words& r) {
  const long nh = static_cast<long>(h.size());
  const long nr = static_cast<long>(r.size());
  std::vector<std::vector<Cell>> dist(nh + 1, std::vector<Cell>(nr + 1, Cell{kInfinity, 'x'}));
  for (long j = 0; j <= nr; ++j) dist[0][j] = {j, 'i'};

  const double ratio = nh ? static_cast<double>(nr) / static_cast<double>(nh) : 1.0;
  long beam = kBeamWidth;
  if (static_cast<double>(kBeamWidth) < ratio / 2)
    beam = static_cast<long>(std::ceil(ratio / 2 + kBeamWidth));

  for (long i = 1; i <= nh; ++i) {
    const long diag = static_cast<long>(std::floor(static_cast<double>(i) * ratio));
    const long min_j = std::max(0L, diag - beam);
    long max_j = std::min(nr + 1, diag + beam);
    if (i == nh) max_j = nr + 1;
    for (long j = min_j; j < max_j; ++j) {
      if (j == 0) {
        dist[i][0] = {dist[i - 1][0].cost + 1, 'd'};
        continue;
      }
      const bool same = h[i - 1] == r[j - 1];
      const Cell ops[3] = {{dist[i - 1][j - 1].cost + (same ? 0 : 1), same ? ' ' : 's'},
                           {dist[i - 1][j].cost + 1, 'd'},
                           {dist[i][j - 1].cost + 1, 'i'}};
      for (const auto& op : ops)
        if (dist[i][j].cost > op.cost) dist[i][j] = op;
    }
  }

  std::string trace;
  for (long i = nh, j = nr; i > 0 || j > 0;) {
    const char op = dist[i][j].op;
    trace.push_back(op);
    if (op == ' ' || op == 's') {
      --i;
      --j;
    } else if (op == 'i') {
      --j;
    } else if (op == 'd') {
      --i;
    } else {
      throw Error("TER trace reached an unfilled cell");
    }
  }
  std::reverse(trace.begin(), trace.end());
  return {dist[nh][nr].cost, trace};
}

Words slice(const Words& w, long a, long b) {
  const long n = static_cast<long>(w.size());
  a = std::clamp(a, 0L, n);
  b = std::clamp(b, 0L, n);
  if (b <= a) return {};
  return Words(w.begin() + a, w.begin() + b);
}

Words perform_shift(const Words& w, long start, long length, long target) {
  Words out;
  auto cat = [&](const Words& part) { out.insert(out.end(), part.begin(), part.end()); };
  const long n = static_cast<long>(w.size());
  if (target < start) {
    cat(slice(w, 0, target));
    cat(slice(w, start, start + length));
    cat(slice(w, target, start));
    cat(slice(w, start + length, n));
  } else if (target > start + length) {
    cat(slice(w, 0, start));
    cat(slice(w, start + length, target));
    cat(slice(w, start, start + length));
    cat(slice(w, target, n));
  } else {
    cat(slice(w, 0, start));
    cat(slice(w, start + length, length + target));
    cat(slice(w, start, start + length));
    cat(slice(w, length + target, n));
  }
  return out;
}

struct ShiftOutcome {
  long delta = 0;
  Words words;
};

ShiftOutcome best_shift(const Words& h, const Words& r, long& checked) {
  const auto [pre_score, inv_trace] = beam_edit_distance(h, r);
  // Flip to a recipe for rewriting the reference into the hypothesis.
  std::vector<long> align;
  std::vector<int> ref_err, hyp_err;
  long pos_h = -1;
  for (char op : inv_trace) {
    switch (op) {
      case ' ':
      case 's':
        ++pos_h;
        align.push_back(pos_h);
        hyp_err.push_back(op == 's');
        ref_err.push_back(op == 's');
        break;
      case 'd':  // flipped to an insertion
        ++pos_h;
        hyp_err.push_back(1);
        break;
      case 'i':  // flipped to a deletion
        align.push_back(pos_h);
        ref_err.push_back(1);
        break;
    }
  }

  const long nh = static_cast<long>(h.size());
  const long nr = static_cast<long>(r.size());
  bool have = false;
  std::array<long, 4> best_key{};
  Words best_words;
  auto sum = [](const std::vector<int>& v, long a, long len) {
    long s = 0;
    for (long k = a; k < a + len && k < static_cast<long>(v.size()); ++k) s += v[k];
    return s;
  };

  for (long sh = 0; sh < nh; ++sh) {
    for (long sr = 0; sr < nr; ++sr) {
      if (std::abs(sr - sh) > kMaxShiftDist) continue;
      for (long len = 0; len < kMaxShiftSize && sh + len < nh && sr + len < nr &&
                         h[sh + len] == r[sr + len];) {
        ++len;
        if (sum(hyp_err, sh, len) == 0) continue;
        if (sum(ref_err, sr, len) == 0) continue;
        if (sh <= align[sr] && align[sr] < sh + len) continue;
        long prev_idx = -1;
        for (long offset = -1; offset < len; ++offset) {
          long idx;
          if (sr + offset == -1) {
            idx = 0;
          } else if (sr + offset < static_cast<long>(align.size())) {
            idx = align[sr + offset] + 1;
          } else {
            break;
          }
          if (idx == prev_idx) continue;
          prev_idx = idx;
          Words shifted = perform_shift(h, sh, len, idx);
          const std::array<long, 4> key = {
              pre_score - beam_edit_distance(shifted, r).first, len, -sh, -idx};
          ++checked;
          if (!have || key > best_key) {
            have = true;
            best_key = key;
            best_words = std::move(shifted);
          }
        }
        if (checked >= kMaxShiftCandidates) goto done;
      }
    }
  }
done:
  if (!have) return {0, h};
  return {best_key[0], std::move(best_words)};
}

}  // namespace

std::pair<long, long> ter_edits(const std::vector<std::string>& hyp,
                                const std::vector<std::string>& ref) {
  const long nr = static_cast<long>(ref.size());
  if (nr == 0) return {static_cast<long>(hyp.size()), 0};
  std::unordered_map<std::string, std::uint32_t> ids;
  auto encode = [&](const std::vector<std::string>& ws) {
    Words out;
    for (const auto& w : ws)
      out.push_back(ids.emplace(w, static_cast<std::uint32_t>(ids.size())).first->second);
    return out;
  };
  const Words r = encode(ref);
  Words h = encode(hyp);

  long shifts = 0;
  long checked = 0;
  for (;;) {
    auto outcome = best_shift(h, r, checked);
    if (checked >= kMaxShiftCandidates) break;
    if (outcome.delta <= 0) break;
    ++shifts;
    h = std::move(outcome.words);
  }
  return {shifts + beam_edit_distance(h, r).first, nr};
}

// ---------------------------------------------------------------------------

namespace {

using NgramCounts = std::unordered_map<std::u32string, long>;

std::array<NgramCounts, kCharOrder> char_ngrams(std::string_view s) {
  std::u32string chars;
  for (auto piece : utf8::split_ws(s)) chars += utf8::decode(piece);
  std::array<NgramCounts, kCharOrder> out;
  for (int n = 1; n <= kCharOrder; ++n)
    for (std::size_t i = 0; i + n <= chars.size(); ++i) ++out[n - 1][chars.substr(i, n)];
  return out;
}

std::vector<double> chrf_stats(std::string_view hyp, std::string_view ref) {
  const auto h = char_ngrams(hyp);
  const auto r = char_ngrams(ref);
  std::vector<double> stats;
  stats.reserve(3 * kCharOrder);
  for (int n = 0; n < kCharOrder; ++n) {
    long hyp_count = 0, match = 0, ref_count = 0;
    for (const auto& [g, c] : h[n]) {
      hyp_count += c;
      auto it = r[n].find(g);
      if (it != r[n].end()) match += std::min(c, it->second);
    }
    for (const auto& [_, c] : r[n]) ref_count += c;
    stats.push_back(r[n].empty() ? 0.0 : static_cast<double>(hyp_count));
    stats.push_back(static_cast<double>(ref_count));
    stats.push_back(static_cast<double>(match));
  }
  return stats;
}

double chrf_from_stats(const std::vector<double>& s) {
  const double factor = kBeta * kBeta;
  double avg_prec = 0.0, avg_rec = 0.0;
  int effective = 0;
  for (int n = 0; n < kCharOrder; ++n) {
    const double nh = s[3 * n], nr = s[3 * n + 1], nm = s[3 * n + 2];
    if (nh > 0 && nr > 0) {
      avg_prec += nm / nh;
      avg_rec += nm / nr;
      ++effective;
    }
  }
  if (effective == 0) return 0.0;
  avg_prec /= effective;
  avg_rec /= effective;
  if (avg_prec + avg_rec == 0.0) return 0.0;
  return 100.0 * (1 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec);
}

std::map<std::string, long> word_ngrams(const std::vector<std::string_view>& words, int n) {
  std::map<std::string, long> out;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key.push_back(' ');
      key += words[i + k];
    }
    ++out[key];
  }
  return out;
}

// [sys_len, ref_len, correct_1..4, total_1..4]
std::vector<double> bleu_stats(std::string_view hyp, std::string_view ref) {
  const std::string th = tokenize_13a(utf8::rstrip(hyp));
  const std::string tr = tokenize_13a(utf8::rstrip(ref));
  const auto hw = utf8::split_ws(th);
  const auto rw = utf8::split_ws(tr);
  std::vector<double> stats(2 + 2 * kBleuOrder, 0.0);
  stats[0] = static_cast<double>(hw.size());
  stats[1] = static_cast<double>(rw.size());
  for (int n = 1; n <= kBleuOrder; ++n) {
    const auto hg = word_ngrams(hw, n);
    const auto rg = word_ngrams(rw, n);
    long correct = 0, total = 0;
    for (const auto& [g, c] : hg) {
      total += c;
      auto it = rg.find(g);
      if (it != rg.end()) correct += std::min(c, it->second);
    }
    stats[1 + n] = static_cast<double>(correct);
    stats[1 + kBleuOrder + n] = static_cast<double>(total);
  }
  return stats;
}

double bleu_log(double p) { return p == 0.0 ? -9999999999.0 : std::log(p); }

double bleu_from_stats(const std::vector<double>& s) {
  const double sys_len = s[0], ref_len = s[1];
  double bp = 1.0;
  if (sys_len < ref_len) bp = sys_len > 0 ? std::exp(1 - ref_len / sys_len) : 0.0;
  bool any = false;
  for (int n = 0; n < kBleuOrder; ++n) any = any || s[2 + n] != 0.0;
  if (!any) return 0.0;
  std::array<double, kBleuOrder> prec{};
  double smooth = 1.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    const double correct = s[2 + n], total = s[2 + kBleuOrder + n];
    if (total == 0.0) break;
    if (correct == 0.0) {
      smooth *= 2;
      prec[n] = 1.0 / (smooth * total);
    } else {
      prec[n] = correct / total;
    }
  }
  double sum = 0.0;
  for (double p : prec) sum += bleu_log(p);
  // Precisions as fractions, so a perfect match scores exactly 100.
  return 100.0 * bp * std::exp(sum / kBleuOrder);
}

std::vector<double> ter_stats(std::string_view hyp, std::string_view ref) {
  auto words = [](std::string_view s) {
    std::vector<std::string> out;
    const std::string t = tokenize_tercom(utf8::rstrip(s));
    for (auto w : utf8::split_ws(t)) out.emplace_back(w);
    return out;
  };
  const auto [edits, len] = ter_edits(words(hyp), words(ref));
  return {static_cast<double>(edits), static_cast<double>(len)};
}

double ter_from_stats(const std::vector<double>& s) {
  return 100.0 * (s[1] > 0 ? s[0] / s[1] : 1.0);
}

void check_inputs(const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
  if (hyps.size() != refs.size())
    throw ConfigError("hypothesis count " + std::to_string(hyps.size()) +
                      " does not match reference count " + std::to_string(refs.size()));
  if (hyps.empty()) throw ConfigError("cannot score an empty corpus");
}

std::vector<std::vector<double>> all_stats(Metric m, const std::vector<std::string>& hyps,
                                           const std::vector<std::string>& refs,
                                           unsigned threads) {
  std::vector<std::vector<double>> out(hyps.size());
  for_each_block(hyps.size(), 16, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = segment_stats(m, hyps[i], refs[i]);
  });
  return out;
}

std::vector<double> sum_stats(const std::vector<std::vector<double>>& stats) {
  std::vector<double> total(stats.front().size(), 0.0);
  for (const auto& s : stats)
    for (std::size_t k = 0; k < s.size(); ++k) total[k] += s[k];
  return total;
}

}  // namespace

std::vector<double> segment_stats(Metric m, std::string_view hyp, std::string_view ref) {
  switch (m) {
    case Metric::Chrf: return chrf_stats(hyp, ref);
    case Metric::Bleu: return bleu_stats(hyp, ref);
    case Metric::Ter: return ter_stats(hyp, ref);
  }
  return {};
}

double score_from_stats(Metric m, const std::vector<double>& stats) {
  switch (m) {
    case Metric::Chrf: return chrf_from_stats(stats);
    case Metric::Bleu: return bleu_from_stats(stats);
    case Metric::Ter: return ter_from_stats(stats);
  }
  return 0.0;
}

MetricScore score(Metric m, const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references, unsigned threads) {
  check_inputs(hypotheses, references);
  const auto total = sum_stats(all_stats(m, hypotheses, references, threads));
  return {score_from_stats(m, total), signature(m)};
}

MetricScore chrf(const std::vector<std::string>& h, const std::vector<std::string>& r) {
  return score(Metric::Chrf, h, r);
}
MetricScore bleu(const std::vector<std::string>& h, const std::vector<std::string>& r) {
  return score(Metric::Bleu, h, r);
}
MetricScore ter(const std::vector<std::string>& h, const std::vector<std::string>& r) {
  return score(Metric::Ter, h, r);
}

BootstrapResult paired_bootstrap(Metric m, const std::vector<std::string>& sys_a,
                                 const std::vector<std::string>& sys_b,
                                 const std::vector<std::string>& references,
                                 std::size_t n_samples, std::uint64_t seed, unsigned threads) {
  check_inputs(sys_a, references);
  check_inputs(sys_b, references);
  if (n_samples < 100) throw ConfigError("n_samples must be >= 100");

  const auto stats_a = all_stats(m, sys_a, references, threads);
  const auto stats_b = all_stats(m, sys_b, references, threads);
  BootstrapResult result;
  result.n_samples = n_samples;
  result.score_a = score_from_stats(m, sum_stats(stats_a));
  result.score_b = score_from_stats(m, sum_stats(stats_b));

  const double sign = higher_is_better(m) ? 1.0 : -1.0;
  const bool b_better = sign * (result.score_b - result.score_a) >= 0;

  const std::size_t n = references.size();
  const std::size_t width = stats_a.front().size();
  std::vector<double> diffs(n_samples);
  std::vector<char> other_wins(n_samples);
  for_each_block(n_samples, 16, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> ta(width), tb(width);
    for (std::size_t s = b; s < e; ++s) {
      std::fill(ta.begin(), ta.end(), 0.0);
      std::fill(tb.begin(), tb.end(), 0.0);
      Rng rng = Rng::stream(seed, s);
      for (std::size_t k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(rng.below(n));
        for (std::size_t c = 0; c < width; ++c) {
          ta[c] += stats_a[idx][c];
          tb[c] += stats_b[idx][c];
        }
      }
      const double sa = score_from_stats(m, ta), sb = score_from_stats(m, tb);
      diffs[s] = sb - sa;
      const double oa = sign * sa, ob = sign * sb;
      other_wins[s] = b_better ? (oa >= ob) : (ob >= oa);
    }
  });

  double diff_sum = 0.0;
  std::size_t wins = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    diff_sum += diffs[s];
    wins += other_wins[s] ? 1 : 0;
  }
  result.mean_diff = diff_sum / static_cast<double>(n_samples);
  result.p_value = static_cast<double>(wins) / static_cast<double>(n_samples);
  result.significant_at_05 = result.p_value < 0.05;
  return result;
}

}  // namespace mtprep

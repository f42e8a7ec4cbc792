#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mtprep {

enum class Metric { Chrf, Bleu, Ter };

Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric m);
bool higher_is_better(Metric m);

struct MetricScore {
  double value = 0.0;
  std::string signature;
};

// Footnote-style signature, e.g. for chrF
// "nrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|version:1.0.0".
std::string signature(Metric m);

// Tokenizers, matching the mteval-13a and tercom conventions.
std::string tokenize_13a(std::string_view line);
std::string tokenize_tercom(std::string_view line);

// (edits, reference length) with block shifts, after tercom.
std::pair<long, long> ter_edits(const std::vector<std::string>& hyp,
                                const std::vector<std::string>& ref);

// Additive sufficient statistics of one segment; corpus scores are computed
// from their element-wise sum.
std::vector<double> segment_stats(Metric m, std::string_view hyp, std::string_view ref);
double score_from_stats(Metric m, const std::vector<double>& stats);

// Throws ConfigError on empty or mismatched inputs.
MetricScore score(Metric m, const std::vector<std::string>& hypotheses,
                  const std::vector<std::string>& references, unsigned threads = 1);
MetricScore chrf(const std::vector<std::string>& hypotheses,
                 const std::vector<std::string>& references);
MetricScore bleu(const std::vector<std::string>& hypotheses,
                 const std::vector<std::string>& references);
MetricScore ter(const std::vector<std::string>& hypotheses,
                const std::vector<std::string>& references);

struct BootstrapResult {
  double score_a = 0.0;
  double score_b = 0.0;
  double mean_diff = 0.0;  // mean over resamples of score_b - score_a
  double p_value = 1.0;
  std::size_t n_samples = 0;
  bool significant_at_05 = false;
};

// One-sided paired bootstrap. The observed full-corpus comparison picks the
// better system (b on ties); p is the fraction of resamples in which the
// other system ties or beats it.
BootstrapResult paired_bootstrap(Metric m, const std::vector<std::string>& sys_a,
                                 const std::vector<std::string>& sys_b,
                                 const std::vector<std::string>& references,
                                 std::size_t n_samples = 1000, std::uint64_t seed = 12345,
                                 unsigned threads = 1);

}  // namespace mtprep

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtprep/align.h"
#include "mtprep/augment.h"
#include "mtprep/filtering.h"
#include "mtprep/terminology.h"

namespace mtprep {

// Canonical stage order; a run uses a subsequence of it.
inline constexpr std::string_view kStageOrder[] = {
    "filter", "normalize", "placeholders", "tokenize", "truecase",
    "align",  "augment-unk", "bpe",        "tla"};

struct PipelineConfig {
  std::string source_path;
  std::string target_path;
  std::string source_lang;
  std::string target_lang;
  std::string output_dir;
  unsigned threads = 1;
  std::vector<std::string> stages{std::begin(kStageOrder), std::end(kStageOrder)};

  FilterConfig filter;
  AlignConfig align;
  UnkConfig unk;
  std::size_t bpe_merges = 32000;
  TlaConfig tla;

  // Throws ConfigError on order or dependency violations.
  void validate() const;
};

// Unknown keys anywhere in the document are rejected. Relative paths are
// resolved against `base_dir`.
PipelineConfig parse_pipeline_config(std::string_view json, const std::string& base_dir = ".");
PipelineConfig load_pipeline_config(const std::string& path);

// Per-language filtering config from a JSON object with FilterConfig keys.
FilterConfig parse_filter_config(std::string_view json);

struct StageReport {
  std::string stage;
  std::vector<std::string> artifacts;  // paths, in write order
  std::string report_json;
};

// Runs every configured stage in order. Stage i writes its artifacts as
// "<output_dir>/NN-<stage>.*" plus "NN-<stage>.report.json". A failing stage
// aborts the run with an error of the same category naming the stage.
std::vector<StageReport> run_pipeline(const PipelineConfig& config);

}  // namespace mtprep

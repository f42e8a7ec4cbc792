#include "mtprep/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "mtprep/error.h"
#include "mtprep/parallel.h"
#include "mtprep/subword.h"
#include "mtprep/textnorm.h"

namespace mtprep {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::ptrdiff_t stage_rank(std::string_view name) {
  auto it = std::find(std::begin(kStageOrder), std::end(kStageOrder), name);
  return it == std::end(kStageOrder) ? -1 : it - std::begin(kStageOrder);
}

void allow_keys(const json& obj, std::string_view where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [k, _] : obj.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) throw ConfigError("unknown key '" + k + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

FilterConfig filter_from(const json& j) {
  FilterConfig c;
  allow_keys(j, "filter", {"max_tokens", "min_tokens", "max_length_ratio", "min_alnum_ratio",
                           "min_script_ratio", "dedup", "expected_scripts"});
  read(j, "max_tokens", c.max_tokens);
  read(j, "min_tokens", c.min_tokens);
  read(j, "max_length_ratio", c.max_length_ratio);
  read(j, "min_alnum_ratio", c.min_alnum_ratio);
  read(j, "min_script_ratio", c.min_script_ratio);
  read(j, "dedup", c.dedup);
  if (auto it = j.find("expected_scripts"); it != j.end()) {
    allow_keys(*it, "filter.expected_scripts", {"uk", "lv", "lt", "et"});
    for (const auto& [lang, v] : it->items()) {
      const auto s = v.is_string() ? v.get<std::string>() : "";
      if (s == "cyrillic") {
        c.expected_scripts[lang] = utf8::Script::Cyrillic;
      } else if (s == "latin") {
        c.expected_scripts[lang] = utf8::Script::Latin;
      } else {
        throw ConfigError("script for '" + lang + "' must be \"cyrillic\" or \"latin\"");
      }
    }
  }
  c.validate();
  return c;
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

FilterConfig parse_filter_config(std::string_view text) {
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("filter config is not valid JSON");
  return filter_from(j);
}

void PipelineConfig::validate() const {
  if (source_lang.empty() || target_lang.empty())
    throw ConfigError("source_lang and target_lang are required");
  if (source_path.empty() || target_path.empty())
    throw ConfigError("source and target paths are required");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (stages.empty()) throw ConfigError("no stages configured");
  std::ptrdiff_t last = -1;
  std::set<std::string> seen;
  for (const auto& s : stages) {
    const auto r = stage_rank(s);
    if (r < 0) throw ConfigError("unknown stage '" + s + "'");
    if (r <= last)
      throw ConfigError("stage '" + s + "' is out of order (expected " +
                        "filter, normalize, placeholders, tokenize, truecase, align, "
                        "augment-unk, bpe, tla)");
    last = r;
    auto need = [&](const char* dep) {
      if (!seen.count(dep))
        throw ConfigError("stage '" + s + "' requires '" + dep + "' earlier in the sequence");
    };
    if (s == "truecase" || s == "align" || s == "bpe") need("tokenize");
    if (s == "augment-unk" || s == "tla") need("align");
    seen.insert(s);
  }
  align.validate();
  unk.validate();
  tla.validate();
  filter.validate();
}

PipelineConfig parse_pipeline_config(std::string_view text, const std::string& base_dir) {
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("pipeline config is not valid JSON");
  allow_keys(j, "pipeline config",
             {"source", "target", "source_lang", "target_lang", "output_dir", "threads",
              "stages", "filter", "align", "augment_unk", "bpe", "tla"});
  PipelineConfig c;
  read(j, "source", c.source_path);
  read(j, "target", c.target_path);
  read(j, "source_lang", c.source_lang);
  read(j, "target_lang", c.target_lang);
  read(j, "output_dir", c.output_dir);
  read(j, "threads", c.threads);
  read(j, "stages", c.stages);
  c.source_path = resolve(base_dir, c.source_path);
  c.target_path = resolve(base_dir, c.target_path);
  c.output_dir = resolve(base_dir, c.output_dir);
  if (auto it = j.find("filter"); it != j.end()) c.filter = filter_from(*it);
  if (auto it = j.find("align"); it != j.end()) {
    allow_keys(*it, "align", {"iterations", "use_null", "symmetrize"});
    read(*it, "iterations", c.align.iterations);
    read(*it, "use_null", c.align.use_null);
    std::string sym(symmetrize_name(c.align.symmetrize));
    read(*it, "symmetrize", sym);
    c.align.symmetrize = parse_symmetrize(sym);
  }
  if (auto it = j.find("augment_unk"); it != j.end()) {
    allow_keys(*it, "augment_unk",
               {"min_replacements", "max_replacements", "min_word_length", "seed",
                "unk_surface"});
    read(*it, "min_replacements", c.unk.min_replacements);
    read(*it, "max_replacements", c.unk.max_replacements);
    read(*it, "min_word_length", c.unk.min_word_length);
    read(*it, "seed", c.unk.seed);
    read(*it, "unk_surface", c.unk.unk_surface);
  }
  if (auto it = j.find("bpe"); it != j.end()) {
    allow_keys(*it, "bpe", {"merges"});
    read(*it, "merges", c.bpe_merges);
  }
  if (auto it = j.find("tla"); it != j.end()) {
    allow_keys(*it, "tla", {"sample_rate", "seed", "min_stem_length"});
    read(*it, "sample_rate", c.tla.sample_rate);
    read(*it, "seed", c.tla.seed);
    read(*it, "min_stem_length", c.tla.stemmer.min_stem_length);
  }
  c.filter.threads = c.align.threads = c.unk.threads = c.tla.threads = c.threads;
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pipeline_config(text, fs::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------

namespace {

struct State {
  ParallelCorpus corpus;
  std::vector<Alignment> alignments;
  ParallelCorpus word_corpus;  // word-level view kept for TLA after BPE
  std::vector<Alignment> word_alignments;
  const BpeModel* bpe = nullptr;
  BpeModel bpe_model;
};

class Runner {
 public:
  explicit Runner(const PipelineConfig& c) : c_(c) {}

  std::vector<StageReport> run() {
    fs::create_directories(c_.output_dir);
    state_.corpus = load_parallel(c_.source_path, c_.target_path, c_.source_lang, c_.target_lang);
    std::vector<StageReport> reports;
    for (std::size_t i = 0; i < c_.stages.size(); ++i) {
      const auto& name = c_.stages[i];
      char prefix[8];
      std::snprintf(prefix, sizeof prefix, "%02zu-", i + 1);
      StageReport rep{name, {}, {}};
      prefix_ = (fs::path(c_.output_dir) / (prefix + name)).string();
      current_ = &rep;
      try {
        ojson report = run_stage(name);
        report["stage"] = name;
        rep.report_json = report.dump(2) + "\n";
        const auto path = prefix_ + ".report.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << rep.report_json;
        if (!out) throw IoError("write failure on " + path);
        rep.artifacts.push_back(path);
      } catch (const DataError& e) {
        throw DataError("stage '" + name + "': " + e.what());
      } catch (const IoError& e) {
        throw IoError("stage '" + name + "': " + e.what());
      } catch (const ConfigError& e) {
        throw ConfigError("stage '" + name + "': " + e.what());
      } catch (const std::exception& e) {
        throw Error("stage '" + name + "': " + e.what());
      }
      reports.push_back(std::move(rep));
    }
    return reports;
  }

 private:
  std::string artifact(const std::string& suffix) {
    auto p = prefix_ + suffix;
    current_->artifacts.push_back(p);
    return p;
  }

  void write_corpus() {
    const auto src = artifact(".src");
    const auto tgt = artifact(".tgt");
    write_parallel(state_.corpus, src, tgt);
  }

  template <typename Fn>
  void map_lines(Fn&& fn) {
    auto& pairs = state_.corpus.pairs;
    for_each_block(pairs.size(), 4096, c_.threads,
                   [&](std::size_t, std::size_t b, std::size_t e) {
                     for (std::size_t i = b; i < e; ++i) {
                       pairs[i].source = fn(pairs[i].source);
                       pairs[i].target = fn(pairs[i].target);
                     }
                   });
  }

  ojson run_stage(const std::string& name) {
    ojson r;
    auto& corpus = state_.corpus;
    r["input_pairs"] = corpus.size();
    if (name == "filter") {
      auto result = filter_corpus(corpus, c_.filter);
      corpus = std::move(result.kept);
      r["filter"] = ojson::parse(result.report.to_json());
      write_corpus();
    } else if (name == "normalize") {
      map_lines([](const std::string& s) { return normalize(s); });
      write_corpus();
    } else if (name == "placeholders") {
      const std::size_t n = corpus.size();
      std::vector<std::string> src_maps(n), tgt_maps(n);
      std::uint64_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        auto s = extract_placeholders(corpus.pairs[i].source);
        auto t = extract_placeholders(corpus.pairs[i].target);
        count += s.map.entries.size() + t.map.entries.size();
        corpus.pairs[i] = {std::move(s.text), std::move(t.text)};
        src_maps[i] = placeholder_map_to_json(s.map);
        tgt_maps[i] = placeholder_map_to_json(t.map);
      }
      write_corpus();
      write_lines(artifact(".src.placeholders.jsonl"), src_maps);
      write_lines(artifact(".tgt.placeholders.jsonl"), tgt_maps);
      r["placeholders"] = count;
    } else if (name == "tokenize") {
      map_lines([](const std::string& s) { return join_tokens(tokenize(s)); });
      write_corpus();
    } else if (name == "truecase") {
      TruecaseModel src_model, tgt_model;
      for (const auto& p : corpus.pairs) {
        src_model.observe(split_tokens(p.source));
        tgt_model.observe(split_tokens(p.target));
      }
      src_model.finalize();
      tgt_model.finalize();
      for (auto& p : corpus.pairs) {
        p.source = join_tokens(truecase(split_tokens(p.source), src_model));
        p.target = join_tokens(truecase(split_tokens(p.target), tgt_model));
      }
      write_corpus();
      src_model.save(artifact(".src.model"));
      tgt_model.save(artifact(".tgt.model"));
      r["source_model_size"] = src_model.size();
      r["target_model_size"] = tgt_model.size();
    } else if (name == "align") {
      AlignConfig ac = c_.align;
      ac.threads = c_.threads;
      auto result = align_corpus(corpus, ac);
      state_.alignments = std::move(result.alignments);
      write_alignments(state_.alignments, artifact(".align"));
      result.forward.save(artifact(".fwd.table"));
      result.reverse.save(artifact(".rev.table"));
      std::uint64_t links = 0;
      for (const auto& a : state_.alignments) links += a.size();
      r["links"] = links;
    } else if (name == "augment-unk") {
      UnkConfig uc = c_.unk;
      uc.threads = c_.threads;
      auto result = gen_unknown_synthetic(corpus, state_.alignments, uc);
      corpus = std::move(result.corpus);
      state_.alignments = std::move(result.alignments);
      write_corpus();
      write_alignments(state_.alignments, artifact(".align"));
      r["synthetic"] = result.synthetic_count;
    } else if (name == "bpe") {
      state_.word_corpus = corpus;
      state_.word_alignments = state_.alignments;
      state_.bpe_model = train_bpe(corpus, c_.bpe_merges);
      state_.bpe = &state_.bpe_model;
      map_lines([this](const std::string& s) { return apply_bpe_line(s, state_.bpe_model); });
      write_corpus();
      state_.bpe_model.save(artifact(".model"));
      r["merges"] = state_.bpe_model.merges().size();
    } else if (name == "tla") {
      const bool after_bpe = state_.bpe != nullptr;
      const auto& words = after_bpe ? state_.word_corpus : corpus;
      const auto& links = after_bpe ? state_.word_alignments : state_.alignments;
      TlaConfig tc = c_.tla;
      tc.threads = c_.threads;
      auto result = annotate_training_corpus(words, links, tc);
      std::vector<std::string> src(result.source.size()), tgt(result.target.size());
      for_each_block(src.size(), 4096, c_.threads,
                     [&](std::size_t, std::size_t b, std::size_t e) {
                       for (std::size_t i = b; i < e; ++i) {
                         src[i] = serialize_factored(after_bpe ? apply_bpe(result.source[i], *state_.bpe)
                                                               : result.source[i]);
                         tgt[i] = after_bpe ? apply_bpe_line(result.target[i], *state_.bpe)
                                            : result.target[i];
                       }
                     });
      write_lines(artifact(".src"), src);
      write_lines(artifact(".tgt"), tgt);
      r["annotated"] = result.annotated_count;
      r["output_pairs"] = src.size();
      return r;
    }
    r["output_pairs"] = corpus.size();
    return r;
  }

  const PipelineConfig& c_;
  State state_;
  std::string prefix_;
  StageReport* current_ = nullptr;
};

}  // namespace

std::vector<StageReport> run_pipeline(const PipelineConfig& config) {
  config.validate();
  return Runner(config).run();
}

}  // namespace mtprep

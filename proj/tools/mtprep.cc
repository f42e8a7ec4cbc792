// mtprep: corpus preparation, terminology annotation, evaluation and usage
// reports for Baltic-Ukrainian MT data.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "mtprep/align.h"
#include "mtprep/analytics.h"
#include "mtprep/augment.h"
#include "mtprep/corpus.h"
#include "mtprep/error.h"
#include "mtprep/filtering.h"
#include "mtprep/metrics.h"
#include "mtprep/pipeline.h"
#include "mtprep/subword.h"
#include "mtprep/terminology.h"
#include "mtprep/textnorm.h"

using namespace mtprep;

namespace {

// ---------------------------------------------------------------------------
// Line IO on files or stdin/stdout ("-").

class Input {
 public:
  explicit Input(const std::string& path) : name_(path == "-" ? "<stdin>" : path) {
    if (path != "-") {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw IoError("cannot open " + path);
    }
    reader_ = std::make_unique<LineReader>(file_ ? *file_ : std::cin, name_);
  }
  bool next(std::string& line) { return reader_->next(line); }
  const std::string& name() const { return name_; }
  std::size_t line_number() const { return reader_->line_number(); }

 private:
  std::string name_;
  std::unique_ptr<std::ifstream> file_;
  std::unique_ptr<LineReader> reader_;
};

class Output {
 public:
  explicit Output(const std::string& path) : name_(path == "-" ? "<stdout>" : path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw IoError("cannot open " + path + " for writing");
    }
  }
  ~Output() { stream().flush(); }
  void line(std::string_view s) {
    stream() << s << '\n';
    if (!stream()) throw IoError("write failure on " + name_);
  }
  void text(std::string_view s) {
    stream() << s;
    if (!stream()) throw IoError("write failure on " + name_);
  }
  void flush() {
    stream().flush();
    if (!stream()) throw IoError("write failure on " + name_);
  }

 private:
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  std::string name_;
  std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> read_all(const std::string& path) {
  if (path != "-") return read_lines(path);
  Input in(path);
  std::vector<std::string> lines;
  for (std::string line; in.next(line);) lines.push_back(std::move(line));
  return lines;
}

void write_text_file(const std::string& path, std::string_view text) {
  Output out(path);
  out.text(text);
  out.flush();
}

// Reads two line-aligned files in lock step.
class PairReader {
 public:
  PairReader(const std::string& src, const std::string& tgt) : src_(src), tgt_(tgt) {}
  bool next(SentencePair& pair) {
    const bool a = src_.next(pair.source);
    const bool b = tgt_.next(pair.target);
    if (a != b) {
      std::size_t ns = src_.line_number(), nt = tgt_.line_number();
      std::string rest;
      while (src_.next(rest)) ++ns;
      while (tgt_.next(rest)) ++nt;
      throw DataError("line count mismatch: " + src_.name() + " has " + std::to_string(ns) +
                      " lines, " + tgt_.name() + " has " + std::to_string(nt));
    }
    return a;
  }

 private:
  Input src_;
  Input tgt_;
};

std::pair<std::string, std::string> split_lang_pair(const std::string& pair) {
  auto dash = pair.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == pair.size())
    throw ConfigError("language pair must look like 'uk-lv', got '" + pair + "'");
  return {pair.substr(0, dash), pair.substr(dash + 1)};
}

std::string format1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Subcommands. Each register_* function adds its options and stores the
// action to run after a successful parse.

using Action = std::function<void()>;

void add_filter_flags(CLI::App* cmd, FilterConfig& f) {
  cmd->add_option("--max-tokens", f.max_tokens, "Maximum tokens per side")->capture_default_str();
  cmd->add_option("--min-tokens", f.min_tokens, "Minimum tokens per side")->capture_default_str();
  cmd->add_option("--max-length-ratio", f.max_length_ratio, "Longer/shorter token ratio limit")
      ->capture_default_str();
  cmd->add_option("--min-alnum-ratio", f.min_alnum_ratio,
                  "Minimum alphanumeric share of non-space chars")
      ->capture_default_str();
  cmd->add_option("--min-script-ratio", f.min_script_ratio,
                  "Minimum share of letters in the expected script")
      ->capture_default_str();
  cmd->add_flag("--no-dedup{false}", f.dedup, "Keep exact duplicate pairs");
}

void register_filter(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("filter", "Filter a parallel corpus (streaming)");
  struct Opts {
    std::string src, tgt, src_lang, tgt_lang, out_src, out_tgt, report;
    FilterConfig filter;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--src", o->src, "Source file")->required();
  cmd->add_option("--tgt", o->tgt, "Target file")->required();
  cmd->add_option("--src-lang", o->src_lang, "Source language code")->required();
  cmd->add_option("--tgt-lang", o->tgt_lang, "Target language code")->required();
  cmd->add_option("--out-src", o->out_src, "Kept source lines")->required();
  cmd->add_option("--out-tgt", o->out_tgt, "Kept target lines")->required();
  cmd->add_option("--report", o->report, "Write the JSON report here ('-' for stdout)");
  add_filter_flags(cmd, o->filter);
  cmd->callback([&action, o] {
    action = [o] {
      PairFilter filter(o->filter, o->src_lang, o->tgt_lang);
      PairReader in(o->src, o->tgt);
      Output out_src(o->out_src), out_tgt(o->out_tgt);
      FilterReport report;
      for (SentencePair p; in.next(p);) {
        ++report.input_count;
        if (auto failed = filter.check(p)) {
          report.charge(*failed);
          continue;
        }
        ++report.kept_count;
        out_src.line(p.source);
        out_tgt.line(p.target);
      }
      out_src.flush();
      out_tgt.flush();
      if (!o->report.empty()) write_text_file(o->report, report.to_json() + "\n");
    };
  });
}

void register_preprocess(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand(
      "preprocess", "Normalize, replace entities, tokenize and truecase lines (streaming)");
  struct Opts {
    std::string in = "-", out = "-", placeholders, truecase_model;
    bool no_normalize = false, no_tokenize = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Input file ('-' for stdin)")->capture_default_str();
  cmd->add_option("--out", o->out, "Output file ('-' for stdout)")->capture_default_str();
  cmd->add_option("--placeholders", o->placeholders,
                  "Replace entities and write the JSON-lines placeholder sidecar here");
  cmd->add_option("--truecase-model", o->truecase_model, "Apply this truecasing model");
  cmd->add_flag("--no-normalize", o->no_normalize, "Skip normalization");
  cmd->add_flag("--no-tokenize", o->no_tokenize, "Skip tokenization");
  cmd->callback([&action, o] {
    action = [o] {
      std::optional<TruecaseModel> tc;
      if (!o->truecase_model.empty()) tc = TruecaseModel::load(o->truecase_model);
      if (tc && o->no_tokenize) throw ConfigError("--truecase-model needs tokenization");
      Input in(o->in);
      Output out(o->out);
      std::unique_ptr<Output> side;
      if (!o->placeholders.empty()) side = std::make_unique<Output>(o->placeholders);
      for (std::string line; in.next(line);) {
        if (!o->no_normalize) line = normalize(line);
        if (side) {
          auto r = extract_placeholders(line);
          line = std::move(r.text);
          side->line(placeholder_map_to_json(r.map));
        }
        if (!o->no_tokenize) {
          auto toks = tokenize(line);
          if (tc) toks = truecase(toks, *tc);
          line = join_tokens(toks);
        }
        out.line(line);
      }
      out.flush();
      if (side) side->flush();
    };
  });
}

void register_postprocess(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand(
      "postprocess", "Undo BPE, truecasing and tokenization, then restore placeholders");
  struct Opts {
    std::string in = "-", out = "-", placeholders, joiner = std::string(kDefaultJoiner);
    bool no_detruecase = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Input file ('-' for stdin)")->capture_default_str();
  cmd->add_option("--out", o->out, "Output file ('-' for stdout)")->capture_default_str();
  cmd->add_option("--placeholders", o->placeholders, "JSON-lines placeholder sidecar");
  cmd->add_option("--joiner", o->joiner, "BPE continuation marker")->capture_default_str();
  cmd->add_flag("--no-detruecase", o->no_detruecase, "Leave the first letter as is");
  cmd->callback([&action, o] {
    action = [o] {
      Input in(o->in);
      Output out(o->out);
      std::unique_ptr<Input> side;
      if (!o->placeholders.empty()) side = std::make_unique<Input>(o->placeholders);
      for (std::string line; in.next(line);) {
        auto toks = debpe(split_tokens(line), o->joiner);
        if (!o->no_detruecase) toks = detruecase(toks);
        line = detokenize(toks);
        if (side) {
          std::string map_line;
          if (!side->next(map_line))
            throw DataError("placeholder sidecar ends before line " +
                            std::to_string(in.line_number()));
          line = restore_placeholders(line, placeholder_map_from_json(map_line));
        }
        out.line(line);
      }
      out.flush();
    };
  });
}

void register_train_truecase(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("train-truecase", "Train a truecasing model");
  struct Opts {
    std::string in = "-", model;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Tokenized training text ('-' for stdin)")->capture_default_str();
  cmd->add_option("--model", o->model, "Output model file")->required();
  cmd->callback([&action, o] {
    action = [o] { train_truecaser({"", read_all(o->in)}).save(o->model); };
  });
}

void register_truecase(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("truecase", "Truecase tokenized lines (streaming)");
  struct Opts {
    std::string in = "-", out = "-", model;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Input file ('-' for stdin)")->capture_default_str();
  cmd->add_option("--out", o->out, "Output file ('-' for stdout)")->capture_default_str();
  cmd->add_option("--model", o->model, "Truecasing model")->required();
  cmd->callback([&action, o] {
    action = [o] {
      const auto model = TruecaseModel::load(o->model);
      Input in(o->in);
      Output out(o->out);
      for (std::string line; in.next(line);)
        out.line(join_tokens(truecase(split_tokens(line), model)));
      out.flush();
    };
  });
}

void register_align(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("align", "Word-align a tokenized corpus with IBM Model 1");
  struct Opts {
    std::string src, tgt, out = "-", fwd, rev, symmetrize = "intersection";
    AlignConfig config;
    bool no_null = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--src", o->src, "Tokenized source file")->required();
  cmd->add_option("--tgt", o->tgt, "Tokenized target file")->required();
  cmd->add_option("--out", o->out, "Alignments in i-j format ('-' for stdout)")
      ->capture_default_str();
  cmd->add_option("--iterations", o->config.iterations, "EM iterations")->capture_default_str();
  cmd->add_flag("--no-null", o->no_null, "Do not use a NULL source token");
  cmd->add_option("--symmetrize", o->symmetrize, "intersection, union or source-to-target")
      ->capture_default_str();
  cmd->add_option("--fwd-table", o->fwd, "Write the source-to-target table here");
  cmd->add_option("--rev-table", o->rev, "Write the target-to-source table here");
  cmd->add_option("--threads", o->config.threads, "Worker threads")->capture_default_str();
  cmd->callback([&action, o] {
    action = [o] {
      AlignConfig c = o->config;
      c.use_null = !o->no_null;
      c.symmetrize = parse_symmetrize(o->symmetrize);
      auto result = align_corpus(load_parallel(o->src, o->tgt), c);
      Output out(o->out);
      for (const auto& a : result.alignments) out.line(format_alignment(a));
      out.flush();
      if (!o->fwd.empty()) result.forward.save(o->fwd);
      if (!o->rev.empty()) result.reverse.save(o->rev);
    };
  });
}

void register_train_bpe(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("train-bpe", "Learn BPE merges (joint over all inputs)");
  struct Opts {
    std::vector<std::string> in;
    std::string model;
    std::size_t merges = 32000;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Tokenized training files")->required();
  cmd->add_option("--merges", o->merges, "Number of merges")->capture_default_str();
  cmd->add_option("--model", o->model, "Output model file")->required();
  cmd->callback([&action, o] {
    action = [o] {
      std::vector<std::string> lines;
      for (const auto& f : o->in) {
        auto part = read_all(f);
        lines.insert(lines.end(), part.begin(), part.end());
      }
      train_bpe(word_counts(lines), o->merges).save(o->model);
    };
  });
}

void register_apply_bpe(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("apply-bpe", "Segment tokenized lines with BPE (streaming)");
  struct Opts {
    std::string in = "-", out = "-", model;
    bool factored = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Input file ('-' for stdin)")->capture_default_str();
  cmd->add_option("--out", o->out, "Output file ('-' for stdout)")->capture_default_str();
  cmd->add_option("--model", o->model, "BPE model")->required();
  cmd->add_flag("--factored", o->factored, "Input is factored text; factors are copied to pieces");
  cmd->callback([&action, o] {
    action = [o] {
      const auto model = BpeModel::load(o->model);
      Input in(o->in);
      Output out(o->out);
      for (std::string line; in.next(line);)
        out.line(o->factored ? serialize_factored(apply_bpe(parse_factored(line), model))
                             : apply_bpe_line(line, model));
      out.flush();
    };
  });
}

void add_unk(CLI::App* cmd, Action& action) {
  struct Opts {
    std::vector<std::string> in;
    std::string align, out_src, out_tgt, out_align;
    UnkConfig config;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--in", o->in, "Tokenized source and target files")->required()->expected(2);
  cmd->add_option("--align", o->align, "Alignments of the input pairs")->required();
  cmd->add_option("--out-src", o->out_src, "Augmented source file")->required();
  cmd->add_option("--out-tgt", o->out_tgt, "Augmented target file")->required();
  cmd->add_option("--out-align", o->out_align, "Alignments of the augmented corpus");
  cmd->add_option("--seed", o->config.seed, "Random seed")->capture_default_str();
  cmd->add_option("--min-replacements", o->config.min_replacements, "Fewest links replaced")
      ->capture_default_str();
  cmd->add_option("--max-replacements", o->config.max_replacements, "Most links replaced")
      ->capture_default_str();
  cmd->add_option("--min-word-length", o->config.min_word_length,
                  "Shortest replaceable word (code points)")
      ->capture_default_str();
  cmd->add_option("--unk", o->config.unk_surface, "Unknown-word surface")->capture_default_str();
  cmd->add_option("--threads", o->config.threads, "Worker threads")->capture_default_str();
  cmd->callback([&action, o] {
    action = [o] {
      auto corpus = load_parallel(o->in[0], o->in[1]);
      auto result = gen_unknown_synthetic(corpus, read_alignments(o->align), o->config);
      write_parallel(result.corpus, o->out_src, o->out_tgt);
      if (!o->out_align.empty()) write_alignments(result.alignments, o->out_align);
    };
  });
}

void add_bt(CLI::App* cmd, Action& action) {
  struct Opts {
    std::string mono, translated, src_lang, tgt_lang, out_src, out_tgt, report;
    BtAssemblyConfig config;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--mono", o->mono, "Target-language originals")->required();
  cmd->add_option("--translated", o->translated, "Their machine translations")->required();
  cmd->add_option("--src-lang", o->src_lang, "Language of the translations")->required();
  cmd->add_option("--tgt-lang", o->tgt_lang, "Language of the originals")->required();
  cmd->add_option("--out-src", o->out_src, "Synthetic source file")->required();
  cmd->add_option("--out-tgt", o->out_tgt, "Synthetic target file")->required();
  cmd->add_option("--report", o->report, "Write the JSON filter report here ('-' for stdout)");
  cmd->add_flag("--tag-source", o->config.tag_source, "Prefix every source with the tag token");
  cmd->add_option("--tag", o->config.tag, "Synthetic-data tag token")->capture_default_str();
  add_filter_flags(cmd, o->config.filter);
  cmd->callback([&action, o] {
    action = [o] {
      auto result = assemble_backtranslated(load_monolingual(o->mono, o->tgt_lang),
                                            load_monolingual(o->translated, o->src_lang),
                                            o->config);
      write_parallel(result.kept, o->out_src, o->out_tgt);
      if (!o->report.empty()) write_text_file(o->report, result.report.to_json() + "\n");
    };
  });
}

void register_augment(CLI::App& app, Action& action) {
  add_unk(app.add_subcommand("augment-unk", "Append synthetic unknown-word copies"), action);
  add_bt(app.add_subcommand("augment-bt", "Assemble and filter back-translated data"), action);
  auto* group = app.add_subcommand("augment", "Data augmentation (unk, bt)");
  group->require_subcommand(1);
  add_unk(group->add_subcommand("unk", "Append synthetic unknown-word copies"), action);
  add_bt(group->add_subcommand("bt", "Assemble and filter back-translated data"), action);
}

void register_annotate(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand(
      "annotate", "Glossary annotation of raw lines, or training-time TLA with --align");
  struct Opts {
    std::string glossary, lang_pair, glossary_pair, in = "-", out = "-";
    std::string src, tgt, align, out_src, out_tgt;
    bool pretokenized = false;
    TlaConfig tla;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--lang-pair", o->lang_pair, "Translation direction, e.g. uk-lv")->required();
  cmd->add_option("--glossary", o->glossary, "Glossary TSV");
  cmd->add_option("--glossary-lang-pair", o->glossary_pair,
                  "Direction of the glossary file (default: --lang-pair)");
  cmd->add_option("--in", o->in, "Input file ('-' for stdin)")->capture_default_str();
  cmd->add_option("--out", o->out, "Output file ('-' for stdout)")->capture_default_str();
  cmd->add_flag("--pretokenized", o->pretokenized, "Input is already tokenized");
  cmd->add_option("--src", o->src, "Training mode: tokenized source file");
  cmd->add_option("--tgt", o->tgt, "Training mode: tokenized target file");
  cmd->add_option("--align", o->align, "Training mode: alignments");
  cmd->add_option("--out-src", o->out_src, "Training mode: factored source output");
  cmd->add_option("--out-tgt", o->out_tgt, "Training mode: target output");
  cmd->add_option("--sample-rate", o->tla.sample_rate, "Training mode: annotation probability")
      ->capture_default_str();
  cmd->add_option("--seed", o->tla.seed, "Training mode: random seed")->capture_default_str();
  cmd->add_option("--threads", o->tla.threads, "Worker threads")->capture_default_str();
  cmd->callback([&action, o] {
    action = [o] {
      const auto [src_lang, tgt_lang] = split_lang_pair(o->lang_pair);
      if (!o->align.empty()) {
        if (o->src.empty() || o->tgt.empty() || o->out_src.empty() || o->out_tgt.empty())
          throw ConfigError("training mode needs --src, --tgt, --out-src and --out-tgt");
        auto corpus = load_parallel(o->src, o->tgt, src_lang, tgt_lang);
        auto result = annotate_training_corpus(corpus, read_alignments(o->align), o->tla);
        std::vector<std::string> lines;
        lines.reserve(result.source.size());
        for (const auto& s : result.source) lines.push_back(serialize_factored(s));
        write_lines(o->out_src, lines);
        write_lines(o->out_tgt, result.target);
        return;
      }
      if (o->glossary.empty()) throw ConfigError("--glossary is required");
      const auto [g_src, g_tgt] =
          split_lang_pair(o->glossary_pair.empty() ? o->lang_pair : o->glossary_pair);
      Glossary glossary = load_glossary(o->glossary, g_src, g_tgt);
      if (g_src == tgt_lang && g_tgt == src_lang) {
        glossary = reversed(glossary);
      } else if (g_src != src_lang || g_tgt != tgt_lang) {
        throw ConfigError("glossary direction " + g_src + "-" + g_tgt + " does not fit " +
                          o->lang_pair);
      }
      Input in(o->in);
      Output out(o->out);
      for (std::string line; in.next(line);) {
        const Tokens toks = o->pretokenized ? split_tokens(line) : tokenize(normalize(line));
        out.line(serialize_factored(annotate_glossary(toks, match_terms(toks, glossary))));
      }
      out.flush();
    };
  });
}

void register_evaluate(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("evaluate", "Score a hypothesis file: score<TAB>signature");
  struct Opts {
    std::string metric, hyp, ref;
    unsigned threads = 1;
    bool full = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--metric", o->metric, "chrf, bleu or ter")->required();
  cmd->add_option("--hyp", o->hyp, "Hypotheses")->required();
  cmd->add_option("--ref", o->ref, "References")->required();
  cmd->add_option("--threads", o->threads, "Worker threads")->capture_default_str();
  cmd->add_flag("--full-precision", o->full, "Print the unrounded score");
  cmd->callback([&action, o] {
    action = [o] {
      const auto s = score(parse_metric(o->metric), read_all(o->hyp), read_all(o->ref), o->threads);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", s.value);
      std::cout << (o->full ? std::string(buf) : format1(s.value)) << '\t' << s.signature << '\n';
    };
  });
}

void register_significance(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("significance", "Paired bootstrap test of two systems");
  struct Opts {
    std::string metric, a, b, ref;
    std::size_t samples = 1000;
    std::uint64_t seed = 12345;
    unsigned threads = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--metric", o->metric, "chrf, bleu or ter")->required();
  cmd->add_option("--sys-a", o->a, "Baseline system output")->required();
  cmd->add_option("--sys-b", o->b, "Compared system output")->required();
  cmd->add_option("--ref", o->ref, "References")->required();
  cmd->add_option("--samples", o->samples, "Bootstrap resamples (>= 100)")->capture_default_str();
  cmd->add_option("--seed", o->seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", o->threads, "Worker threads")->capture_default_str();
  cmd->callback([&action, o] {
    action = [o] {
      const auto m = parse_metric(o->metric);
      const auto r = paired_bootstrap(m, read_all(o->a), read_all(o->b), read_all(o->ref),
                                      o->samples, o->seed, o->threads);
      char p[32], d[32];
      std::snprintf(p, sizeof p, "%.4f", r.p_value);
      std::snprintf(d, sizeof d, "%.4f", r.mean_diff);
      std::cout << "metric\t" << metric_name(m) << "\n"
                << "sys_a\t" << format1(r.score_a) << "\n"
                << "sys_b\t" << format1(r.score_b) << "\n"
                << "mean_diff\t" << d << "\n"
                << "p_value\t" << p << "\n"
                << "samples\t" << r.n_samples << "\n"
                << "significant\t" << (r.significant_at_05 ? "yes" : "no") << "\n"
                << "signature\t" << signature(m) << "\n";
    };
  });
}

void register_usage_report(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("usage-report", "Aggregate translation usage logs");
  struct Opts {
    std::string logs, system, from, to, format = "csv", out = "-";
    std::size_t top = 10;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--logs", o->logs, "JSON-lines usage log")->required();
  cmd->add_option("--system", o->system, "System id, e.g. lt-uk")->required();
  cmd->add_option("--from", o->from, "First date (YYYY-MM-DD)")->required();
  cmd->add_option("--to", o->to, "Last date (YYYY-MM-DD)")->required();
  cmd->add_option("--top-clients", o->top, "Number of client domains to rank")
      ->capture_default_str();
  cmd->add_option("--format", o->format, "csv or json")->capture_default_str();
  cmd->add_option("--out", o->out, "Output file ('-' for stdout)")->capture_default_str();
  cmd->callback([&action, o] {
    action = [o] {
      const auto fmt = parse_report_format(o->format);
      auto ingest = ingest_logs(o->logs);
      if (ingest.malformed_count)
        std::cerr << "mtprep: skipped " << ingest.malformed_count << " malformed log line(s)\n";
      const auto report = build_report(ingest.records, o->system, parse_date(o->from),
                                       parse_date(o->to), o->top);
      Output out(o->out);
      out.text(render_report(report, fmt));
      out.flush();
    };
  });
}

void register_run(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("run", "Run a pipeline described by a JSON config");
  auto path = std::make_shared<std::string>();
  cmd->add_option("--config", *path, "Pipeline config file")->required();
  cmd->callback([&action, path] {
    action = [path] {
      for (const auto& r : run_pipeline(load_pipeline_config(*path)))
        std::cerr << "mtprep: stage " << r.stage << " done (" << r.artifacts.size()
                  << " files)\n";
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus preparation, terminology annotation and evaluation for MT"};
  app.set_version_flag("--version", MTPREP_VERSION);
  app.require_subcommand(1);
  Action action;
  register_filter(app, action);
  register_preprocess(app, action);
  register_postprocess(app, action);
  register_train_truecase(app, action);
  register_truecase(app, action);
  register_align(app, action);
  register_train_bpe(app, action);
  register_apply_bpe(app, action);
  register_augment(app, action);
  register_annotate(app, action);
  register_evaluate(app, action);
  register_significance(app, action);
  register_usage_report(app, action);
  register_run(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (action) action();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "mtprep: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "mtprep: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "mtprep: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "mtprep: " << e.what() << '\n';
    return 2;
  }
}

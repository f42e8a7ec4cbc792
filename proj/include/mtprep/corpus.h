#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace mtprep {

struct SentencePair {
  std::string source;
  std::string target;

  bool operator==(const SentencePair&) const = default;
};

struct ParallelCorpus {
  std::string source_lang;
  std::string target_lang;
  std::vector<SentencePair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool operator==(const ParallelCorpus&) const = default;
};

struct MonolingualCorpus {
  std::string lang;
  std::vector<std::string> lines;

  std::size_t size() const { return lines.size(); }
  bool operator==(const MonolingualCorpus&) const = default;
};

// Tokens of one sentence; never empty strings, never containing whitespace.
using Tokens = std::vector<std::string>;

Tokens split_tokens(std::string_view line);
std::string join_tokens(const Tokens& tokens);

// ---------------------------------------------------------------------------
// Line files. One record per '\n'-terminated line; a final line without a
// terminator is still a record, a trailing '\n' does not add an empty one.
// Content is validated as UTF-8 and kept byte-exact otherwise.

std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

// Incremental reader for streaming subcommands.
class LineReader {
 public:
  LineReader(std::istream& in, std::string name);
  // Reads the next line into `line`; returns false at end of input.
  // Throws DataError naming the line on invalid UTF-8.
  bool next(std::string& line);
  std::size_t line_number() const { return line_no_; }

 private:
  std::istream& in_;
  std::string name_;
  std::size_t line_no_ = 0;
  std::size_t offset_ = 0;
};

ParallelCorpus load_parallel(const std::string& source_path,
                             const std::string& target_path,
                             std::string source_lang = "",
                             std::string target_lang = "");
void write_parallel(const ParallelCorpus& corpus, const std::string& source_path,
                    const std::string& target_path);

MonolingualCorpus load_monolingual(const std::string& path, std::string lang = "");
void write_monolingual(const MonolingualCorpus& corpus, const std::string& path);

// Throws DataError when a line contains '\n' or the language codes clash.
void validate(const ParallelCorpus& corpus);

// ---------------------------------------------------------------------------
// Factored tokens: "surface|FACTOR", space separated.

enum class Factor { Src, TermSrc, TermTgt, Unk };

constexpr char kFactorSeparator = '|';

std::string_view factor_name(Factor f);
Factor parse_factor(std::string_view name);

struct FactoredToken {
  std::string surface;
  Factor factor = Factor::Src;

  bool operator==(const FactoredToken&) const = default;
};

using FactoredSentence = std::vector<FactoredToken>;

// Throws DataError if a surface is empty or contains '|' or whitespace.
std::string serialize_factored(const FactoredSentence& sentence);
FactoredSentence parse_factored(std::string_view line);

// ---------------------------------------------------------------------------
// Word alignments in Moses "i-j" format.

struct Link {
  std::uint32_t src = 0;
  std::uint32_t tgt = 0;

  auto operator<=>(const Link&) const = default;
};

// Links kept sorted by (src, tgt) without duplicates.
struct Alignment {
  std::vector<Link> links;

  Alignment() = default;
  explicit Alignment(std::vector<Link> l);
  void add(Link l);
  bool contains(Link l) const;
  std::size_t size() const { return links.size(); }
  bool operator==(const Alignment&) const = default;
};

std::string format_alignment(const Alignment& alignment);
// `line_no` is 1-based and only used in error messages.
Alignment parse_alignment(std::string_view line, std::size_t line_no = 1);
// Throws DataError when a link index falls outside the sentence lengths.
void check_alignment(const Alignment& alignment, std::size_t src_len,
                     std::size_t tgt_len);

std::vector<Alignment> read_alignments(const std::string& path);
void write_alignments(const std::vector<Alignment>& alignments,
                      const std::string& path);

}  // namespace mtprep

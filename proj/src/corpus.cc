#include "mtprep/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mtprep/error.h"
#include "mtprep/utf8.h"

namespace mtprep {

Tokens split_tokens(std::string_view line) {
  Tokens out;
  for (auto piece : utf8::split_ws(line)) out.emplace_back(piece);
  return out;
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  const std::string data = std::move(buf).str();
  if (auto bad = utf8::find_invalid(data))
    throw DataError(path + ": invalid UTF-8 at byte offset " + std::to_string(*bad));

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t nl = data.find('\n', start);
    if (nl == std::string::npos) {
      lines.emplace_back(data.substr(start));
      break;
    }
    lines.emplace_back(data.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& line : lines) {
    if (line.find('\n') != std::string::npos)
      throw DataError(path + ": record contains a line break");
    out << line << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

LineReader::LineReader(std::istream& in, std::string name)
    : in_(in), name_(std::move(name)) {}

bool LineReader::next(std::string& line) {
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw IoError("read failure on " + name_);
    return false;
  }
  ++line_no_;
  if (auto bad = utf8::find_invalid(line))
    throw DataError(name_ + ": invalid UTF-8 at byte offset " +
                    std::to_string(offset_ + *bad) + " (line " +
                    std::to_string(line_no_) + ")");
  offset_ += line.size() + 1;
  return true;
}

void validate(const ParallelCorpus& corpus) {
  if (!corpus.source_lang.empty() && corpus.source_lang == corpus.target_lang)
    throw DataError("source and target language are both '" + corpus.source_lang + "'");
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    const auto& p = corpus.pairs[i];
    if (p.source.find('\n') != std::string::npos ||
        p.target.find('\n') != std::string::npos)
      throw DataError("pair " + std::to_string(i + 1) + " contains a line break");
  }
}

ParallelCorpus load_parallel(const std::string& source_path,
                             const std::string& target_path,
                             std::string source_lang, std::string target_lang) {
  auto src = read_lines(source_path);
  auto tgt = read_lines(target_path);
  if (src.size() != tgt.size())
    throw DataError("line count mismatch: " + source_path + " has " +
                    std::to_string(src.size()) + " lines, " + target_path +
                    " has " + std::to_string(tgt.size()));
  ParallelCorpus corpus{std::move(source_lang), std::move(target_lang), {}};
  corpus.pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    corpus.pairs.push_back({std::move(src[i]), std::move(tgt[i])});
  validate(corpus);
  return corpus;
}

void write_parallel(const ParallelCorpus& corpus, const std::string& source_path,
                    const std::string& target_path) {
  validate(corpus);
  std::vector<std::string> src, tgt;
  src.reserve(corpus.size());
  tgt.reserve(corpus.size());
  for (const auto& p : corpus.pairs) {
    src.push_back(p.source);
    tgt.push_back(p.target);
  }
  write_lines(source_path, src);
  write_lines(target_path, tgt);
}

MonolingualCorpus load_monolingual(const std::string& path, std::string lang) {
  return {std::move(lang), read_lines(path)};
}

void write_monolingual(const MonolingualCorpus& corpus, const std::string& path) {
  write_lines(path, corpus.lines);
}

// ---------------------------------------------------------------------------

std::string_view factor_name(Factor f) {
  switch (f) {
    case Factor::Src: return "SRC";
    case Factor::TermSrc: return "TERM-SRC";
    case Factor::TermTgt: return "TERM-TGT";
    case Factor::Unk: return "UNK";
  }
  return "SRC";
}

Factor parse_factor(std::string_view name) {
  if (name == "SRC") return Factor::Src;
  if (name == "TERM-SRC") return Factor::TermSrc;
  if (name == "TERM-TGT") return Factor::TermTgt;
  if (name == "UNK") return Factor::Unk;
  throw DataError("unknown factor '" + std::string(name) + "'");
}

namespace {

void check_surface(std::string_view surface) {
  if (surface.empty()) throw DataError("factored token with empty surface");
  if (surface.find(kFactorSeparator) != std::string_view::npos)
    throw DataError("surface '" + std::string(surface) + "' contains '|'");
  for (std::size_t pos = 0; pos < surface.size();)
    if (utf8::is_space(utf8::next(surface, pos)))
      throw DataError("surface '" + std::string(surface) + "' contains whitespace");
}

}  // namespace

std::string serialize_factored(const FactoredSentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    check_surface(sentence[i].surface);
    if (i) out.push_back(' ');
    out += sentence[i].surface;
    out.push_back(kFactorSeparator);
    out += factor_name(sentence[i].factor);
  }
  return out;
}

FactoredSentence parse_factored(std::string_view line) {
  FactoredSentence out;
  for (auto piece : utf8::split_ws(line)) {
    auto sep = piece.rfind(kFactorSeparator);
    if (sep == std::string_view::npos)
      throw DataError("factored token '" + std::string(piece) + "' has no factor");
    auto surface = piece.substr(0, sep);
    check_surface(surface);
    out.push_back({std::string(surface), parse_factor(piece.substr(sep + 1))});
  }
  return out;
}

// ---------------------------------------------------------------------------

Alignment::Alignment(std::vector<Link> l) : links(std::move(l)) {
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

void Alignment::add(Link l) {
  auto it = std::lower_bound(links.begin(), links.end(), l);
  if (it == links.end() || *it != l) links.insert(it, l);
}

bool Alignment::contains(Link l) const {
  return std::binary_search(links.begin(), links.end(), l);
}

std::string format_alignment(const Alignment& alignment) {
  std::string out;
  for (std::size_t i = 0; i < alignment.links.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(alignment.links[i].src);
    out.push_back('-');
    out += std::to_string(alignment.links[i].tgt);
  }
  return out;
}

namespace {

bool parse_index(std::string_view s, std::uint32_t& value) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Alignment parse_alignment(std::string_view line, std::size_t line_no) {
  std::vector<Link> links;
  for (auto piece : utf8::split_ws(line)) {
    auto dash = piece.find('-');
    Link link;
    if (dash == std::string_view::npos || !parse_index(piece.substr(0, dash), link.src) ||
        !parse_index(piece.substr(dash + 1), link.tgt))
      throw DataError("malformed alignment link '" + std::string(piece) +
                      "' at line " + std::to_string(line_no));
    links.push_back(link);
  }
  return Alignment(std::move(links));
}

void check_alignment(const Alignment& alignment, std::size_t src_len,
                     std::size_t tgt_len) {
  for (const auto& l : alignment.links)
    if (l.src >= src_len || l.tgt >= tgt_len)
      throw DataError("alignment link " + std::to_string(l.src) + "-" +
                      std::to_string(l.tgt) + " outside sentence lengths " +
                      std::to_string(src_len) + "/" + std::to_string(tgt_len));
}

std::vector<Alignment> read_alignments(const std::string& path) {
  auto lines = read_lines(path);
  std::vector<Alignment> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i)
    out.push_back(parse_alignment(lines[i], i + 1));
  return out;
}

void write_alignments(const std::vector<Alignment>& alignments,
                      const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(alignments.size());
  for (const auto& a : alignments) lines.push_back(format_alignment(a));
  write_lines(path, lines);
}

}  // namespace mtprep

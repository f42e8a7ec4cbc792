#include "mtprep/textnorm.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "mtprep/error.h"
#include "mtprep/utf8.h"

namespace mtprep {

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t pos = 0; pos < text.size();) {
    char32_t c = utf8::next(text, pos);
    if (utf8::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    switch (c) {
      case 0x201E: case 0x201C: case 0x201D: case 0x00AB: case 0x00BB: case 0x201F:
        c = U'"';
        break;
      case 0x2019: case 0x2018: case 0x02BC: case 0x00B4: case U'`':
        c = U'\'';
        break;
      case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
        c = U'-';
        break;
      default:
        break;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8::append(out, c);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view entity_name(EntityKind kind) {
  switch (kind) {
    case EntityKind::Email: return "EMAIL";
    case EntityKind::Url: return "URL";
    case EntityKind::Path: return "PATH";
    case EntityKind::Ident: return "IDENT";
  }
  return "IDENT";
}

namespace {

constexpr std::array<EntityKind, 4> kMatchOrder = {
    EntityKind::Url, EntityKind::Email, EntityKind::Path, EntityKind::Ident};

std::optional<EntityKind> parse_kind(std::string_view s) {
  for (auto k : kMatchOrder)
    if (s == entity_name(k)) return k;
  return std::nullopt;
}

// Length of the placeholder-shaped token "__KIND_n__" starting at `pos`, or 0.
std::size_t placeholder_at(std::string_view s, std::size_t pos) {
  if (s.compare(pos, 2, "__") != 0) return 0;
  std::size_t p = pos + 2;
  std::size_t kind_end = p;
  while (kind_end < s.size() && s[kind_end] >= 'A' && s[kind_end] <= 'Z') ++kind_end;
  if (!parse_kind(s.substr(p, kind_end - p))) return 0;
  p = kind_end;
  if (p >= s.size() || s[p] != '_') return 0;
  ++p;
  std::size_t digits = p;
  while (digits < s.size() && s[digits] >= '0' && s[digits] <= '9') ++digits;
  if (digits == p) return 0;
  if (s.compare(digits, 2, "__") != 0) return 0;
  return digits + 2 - pos;
}

bool is_ascii_alpha(char32_t c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_alnum(char32_t c) { return is_ascii_alpha(c) || utf8::is_digit(c); }
bool is_scheme_char(char32_t c) { return is_ascii_alnum(c) || c == '+' || c == '.' || c == '-'; }
bool is_local_char(char32_t c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool is_domain_char(char32_t c) { return is_ascii_alnum(c) || c == '-' || c == '.'; }
bool is_segment_char(char32_t c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '~' || c == '-';
}
bool is_ident_char(char32_t c) {
  return utf8::is_alnum(c) || utf8::is_mark(c) || c == '-' || c == '_' || c == '.';
}
bool is_url_trailer(char32_t c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' ||
         c == '\'' || c == '"' || c == ')' || c == ']' || c == '}';
}

struct Span {
  std::size_t begin;
  std::size_t end;
  EntityKind kind;
};

// Matchers work on code points within one unclaimed segment [seg_begin,
// seg_end). Left-boundary checks for URL, EMAIL and PATH look at the real
// preceding character even when it belongs to an earlier entity, so a
// placeholder is never preceded by a digit in the output; that keeps
// restore_placeholders unambiguous.
class EntityScanner {
 public:
  explicit EntityScanner(const std::u32string& cps) : cps_(cps) {}

  std::size_t match(EntityKind kind, std::size_t i, std::size_t seg_begin,
                    std::size_t seg_end) const {
    switch (kind) {
      case EntityKind::Url: return match_url(i, seg_end);
      case EntityKind::Email: return match_email(i, seg_end);
      case EntityKind::Path: return match_path(i, seg_end);
      case EntityKind::Ident: return match_ident(i, seg_begin, seg_end);
    }
    return 0;
  }

 private:
  char32_t at(std::size_t i) const { return cps_[i]; }
  bool prev_is(std::size_t i, bool (*pred)(char32_t)) const {
    return i > 0 && pred(cps_[i - 1]);
  }

  // Extends over non-space characters and strips URL trailers; returns the
  // end, or `from` when nothing remains.
  std::size_t url_rest(std::size_t from, std::size_t seg_end) const {
    std::size_t end = from;
    while (end < seg_end && !utf8::is_space(at(end))) ++end;
    while (end > from && is_url_trailer(at(end - 1))) --end;
    return end;
  }

  std::size_t match_url(std::size_t i, std::size_t seg_end) const {
    if (i + 4 <= seg_end && !prev_is(i, is_ascii_alnum) &&
        utf8::to_lower(at(i)) == 'w' && utf8::to_lower(at(i + 1)) == 'w' &&
        utf8::to_lower(at(i + 2)) == 'w' && at(i + 3) == '.') {
      std::size_t end = url_rest(i + 4, seg_end);
      if (end > i + 4) return end - i;
    }
    if (!is_ascii_alpha(at(i)) || prev_is(i, is_scheme_char)) return 0;
    std::size_t p = i;
    while (p < seg_end && is_scheme_char(at(p))) ++p;
    if (p + 3 > seg_end || at(p) != ':' || at(p + 1) != '/' || at(p + 2) != '/') return 0;
    std::size_t end = url_rest(p + 3, seg_end);
    return end > p + 3 ? end - i : 0;
  }

  std::size_t match_email(std::size_t i, std::size_t seg_end) const {
    if (!is_local_char(at(i)) || prev_is(i, is_local_char)) return 0;
    std::size_t p = i;
    while (p < seg_end && is_local_char(at(p))) ++p;
    if (p >= seg_end || at(p) != '@') return 0;
    const std::size_t domain = p + 1;
    std::size_t end = domain;
    while (end < seg_end && is_domain_char(at(end))) ++end;
    while (end > domain && (at(end - 1) == '.' || at(end - 1) == '-')) --end;
    // Validate labels.
    std::size_t labels = 0, label_start = domain;
    for (std::size_t q = domain; q <= end; ++q) {
      if (q == end || at(q) == '.') {
        if (q == label_start) return 0;
        ++labels;
        label_start = q + 1;
      }
    }
    const std::size_t last = [&] {
      std::size_t q = end;
      while (q > domain && at(q - 1) != '.') --q;
      return q;
    }();
    if (labels < 2 || end - last < 2) return 0;
    for (std::size_t q = last; q < end; ++q)
      if (!is_ascii_alpha(at(q))) return 0;
    return end - i;
  }

  std::size_t match_path(std::size_t i, std::size_t seg_end) const {
    auto path_char = [](char32_t c) { return is_segment_char(c) || c == '/'; };
    if (!path_char(at(i)) || (i > 0 && path_char(at(i - 1)))) return 0;
    std::size_t end = i;
    while (end < seg_end && path_char(at(end))) ++end;
    while (end > i && at(end - 1) == '.') --end;
    const bool leading = at(i) == '/';
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t start = leading ? i + 1 : i;
    for (std::size_t q = start; q <= end; ++q) {
      if (q == end || at(q) == '/') {
        if (q == start) {
          if (q != end) return 0;  // empty interior segment
        } else {
          segments.emplace_back(start, q);
        }
        start = q + 1;
      }
    }
    if (segments.size() < 2) return 0;
    if (!leading) {
      auto [b, e] = segments.back();
      std::size_t dot = e;
      while (dot > b && at(dot - 1) != '.') --dot;
      if (dot == b || dot - 1 == b) return 0;  // no dot, or dot first
      const std::size_t ext_len = e - dot;
      if (ext_len < 1 || ext_len > 6 || !is_ascii_alpha(at(dot))) return 0;
      for (std::size_t q = dot; q < e; ++q)
        if (!is_ascii_alnum(at(q))) return 0;
    }
    return end - i;
  }

  std::size_t match_ident(std::size_t i, std::size_t seg_begin,
                          std::size_t seg_end) const {
    if (!is_ident_char(at(i)) || (i > seg_begin && is_ident_char(at(i - 1)))) return 0;
    std::size_t end = i;
    while (end < seg_end && is_ident_char(at(end))) ++end;
    while (end > i && (at(end - 1) == '.' || at(end - 1) == '-')) --end;
    if (end - i < 8) return 0;
    bool letter = false, digit = false;
    for (std::size_t q = i; q < end; ++q) {
      letter = letter || utf8::is_letter(at(q));
      digit = digit || utf8::is_digit(at(q));
    }
    return letter && digit ? end - i : 0;
  }

  const std::u32string& cps_;
};

}  // namespace

bool is_placeholder(std::string_view token) {
  return !token.empty() && placeholder_at(token, 0) == token.size();
}

const Placeholder* PlaceholderMap::find(std::string_view token) const {
  for (const auto& e : entries)
    if (e.token == token) return &e;
  return nullptr;
}

ExtractResult extract_placeholders(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  const std::size_t n = cps.size();
  std::vector<bool> claimed(n, false);
  std::vector<Span> spans;
  EntityScanner scanner(cps);

  for (EntityKind kind : kMatchOrder) {
    std::size_t i = 0;
    while (i < n) {
      if (claimed[i]) {
        ++i;
        continue;
      }
      std::size_t seg_begin = i, seg_end = i;
      while (seg_end < n && !claimed[seg_end]) ++seg_end;
      const std::size_t first_new = spans.size();
      for (std::size_t p = seg_begin; p < seg_end;) {
        std::size_t len = scanner.match(kind, p, seg_begin, seg_end);
        if (len == 0) {
          ++p;
          continue;
        }
        spans.push_back({p, p + len, kind});
        p += len;
      }
      for (std::size_t k = first_new; k < spans.size(); ++k)
        std::fill(claimed.begin() + spans[k].begin, claimed.begin() + spans[k].end, true);
      i = seg_end;
    }
  }

  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  ExtractResult result;
  std::array<std::size_t, 4> next_index{};
  std::size_t cursor = 0;
  for (const auto& s : spans) {
    result.text += utf8::encode(std::u32string_view(cps).substr(cursor, s.begin - cursor));
    Placeholder ph;
    ph.kind = s.kind;
    ph.original = utf8::encode(std::u32string_view(cps).substr(s.begin, s.end - s.begin));
    ph.token = "__" + std::string(entity_name(s.kind)) + "_" +
               std::to_string(next_index[static_cast<std::size_t>(s.kind)]++) + "__";
    result.text += ph.token;
    result.map.entries.push_back(std::move(ph));
    cursor = s.end;
  }
  result.text += utf8::encode(std::u32string_view(cps).substr(cursor));
  return result;
}

std::string restore_placeholders(std::string_view text, const PlaceholderMap& map) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    if (std::size_t len = placeholder_at(text, pos)) {
      auto token = text.substr(pos, len);
      const Placeholder* ph = map.find(token);
      if (!ph) throw DataError("unknown placeholder " + std::string(token));
      out += ph->original;
      pos += len;
    } else {
      out.push_back(text[pos++]);
    }
  }
  return out;
}

std::string placeholder_map_to_json(const PlaceholderMap& map) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& e : map.entries)
    items.push_back({{"token", e.token},
                     {"original", e.original},
                     {"kind", std::string(entity_name(e.kind))}});
  return nlohmann::json{{"placeholders", items}}.dump();
}

PlaceholderMap placeholder_map_from_json(std::string_view json) {
  PlaceholderMap map;
  try {
    auto doc = nlohmann::json::parse(json);
    for (const auto& item : doc.at("placeholders")) {
      auto kind = parse_kind(item.at("kind").get<std::string>());
      if (!kind) throw DataError("unknown placeholder kind");
      map.entries.push_back({item.at("token").get<std::string>(),
                             item.at("original").get<std::string>(), *kind});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed placeholder map: ") + e.what());
  }
  return map;
}

// ---------------------------------------------------------------------------

namespace {

bool is_word_char(char32_t c) { return utf8::is_alnum(c) || utf8::is_mark(c); }
bool is_letterish(char32_t c) { return utf8::is_letter(c) || utf8::is_mark(c); }

void tokenize_chunk(std::string_view chunk, Tokens& out) {
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  char32_t prev = 0;
  for (std::size_t pos = 0; pos < chunk.size();) {
    if (std::size_t len = placeholder_at(chunk, pos)) {
      flush();
      out.emplace_back(chunk.substr(pos, len));
      pos += len;
      prev = '_';
      continue;
    }
    std::size_t after = pos;
    const char32_t c = utf8::next(chunk, after);
    char32_t next = 0;
    if (after < chunk.size()) {
      std::size_t peek = after;
      next = utf8::next(chunk, peek);
    }
    const bool joins_number = (c == '.' || c == ',') && utf8::is_digit(prev) &&
                              utf8::is_digit(next) && !word.empty();
    const bool joins_word = (c == '-' || c == '\'') && is_letterish(prev) &&
                            is_letterish(next) && !word.empty();
    if (is_word_char(c) || joins_number || joins_word) {
      word.append(chunk.substr(pos, after - pos));
    } else {
      flush();
      out.emplace_back(chunk.substr(pos, after - pos));
    }
    prev = c;
    pos = after;
  }
  flush();
}

bool attaches_left(std::string_view tok) {
  return tok == "." || tok == "," || tok == ";" || tok == ":" || tok == "!" ||
         tok == "?" || tok == ")";
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  for (auto chunk : utf8::split_ws(text)) tokenize_chunk(chunk, out);
  return out;
}

std::string detokenize(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !attaches_left(tokens[i]) && tokens[i - 1] != "(") out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

void TruecaseModel::observe(const Tokens& tokens) {
  for (std::size_t i = 1; i < tokens.size(); ++i)
    ++counts_[utf8::lower(tokens[i])][tokens[i]];
}

void TruecaseModel::finalize() {
  table_.clear();
  for (const auto& [lc, variants] : counts_) {
    const std::string* best = nullptr;
    std::uint64_t best_count = 0;
    // Variants iterate in bytewise order, so the first maximum is the
    // smallest; the lowercase form overrides it on a tie.
    for (const auto& [form, count] : variants) {
      if (!best || count > best_count || (count == best_count && form == lc)) {
        best = &form;
        best_count = count;
      }
    }
    table_[lc] = Entry{*best, best_count};
  }
}

const TruecaseModel::Entry* TruecaseModel::lookup(std::string_view lowercase) const {
  auto it = table_.find(lowercase);
  return it == table_.end() ? nullptr : &it->second;
}

void TruecaseModel::save(const std::string& path) const {
  std::vector<std::string> lines;
  lines.reserve(table_.size());
  for (const auto& [lc, e] : table_)
    lines.push_back(lc + "\t" + e.cased + "\t" + std::to_string(e.count));
  write_lines(path, lines);
}

TruecaseModel TruecaseModel::load(const std::string& path) {
  TruecaseModel model;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw DataError(path + ": malformed truecase record at line " + std::to_string(i + 1));
    std::string lc = line.substr(0, t1);
    std::string cased = line.substr(t1 + 1, t2 - t1 - 1);
    std::uint64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(t2 + 1), &used);
      if (used != line.size() - t2 - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(path + ": bad count at line " + std::to_string(i + 1));
    }
    if (utf8::lower(cased) != lc)
      throw DataError(path + ": key is not the lowercase of its value at line " +
                      std::to_string(i + 1));
    model.table_[lc] = Entry{cased, count};
  }
  return model;
}

TruecaseModel train_truecaser(const MonolingualCorpus& corpus) {
  TruecaseModel model;
  for (const auto& line : corpus.lines) model.observe(split_tokens(line));
  model.finalize();
  return model;
}

Tokens truecase(const Tokens& tokens, const TruecaseModel& model) {
  Tokens out = tokens;
  if (out.empty()) return out;
  if (const auto* e = model.lookup(utf8::lower(out.front()))) out.front() = e->cased;
  return out;
}

Tokens detruecase(const Tokens& tokens) {
  Tokens out = tokens;
  if (out.empty()) return out;
  std::string& first = out.front();
  for (std::size_t pos = 0; pos < first.size();) {
    const std::size_t start = pos;
    const char32_t c = utf8::next(first, pos);
    if (utf8::is_letter(c)) {
      first = first.substr(0, start) + utf8::encode(utf8::to_upper(c)) + first.substr(pos);
      break;
    }
  }
  return out;
}

}  // namespace mtprep

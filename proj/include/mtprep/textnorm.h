#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mtprep/corpus.h"

namespace mtprep {

// Maps typographic quotes, apostrophes and dashes to their ASCII forms,
// collapses Unicode whitespace runs to one space and trims both ends.
// Idempotent.
std::string normalize(std::string_view text);

// ---------------------------------------------------------------------------
// Non-translatable entities.
//
// Recognised entity grammars, tried in the order URL, EMAIL, PATH, IDENT over
// whatever text earlier kinds left unclaimed (leftmost-longest, no overlaps):
//   URL    scheme "://" rest, or "www." rest; rest is any run of non-space
//          characters minus trailing .,;:!?'")]}
//   EMAIL  local "@" label ("." label)+ with local = [A-Za-z0-9._%+-]+,
//          label = [A-Za-z0-9-]+ and an alphabetic final label of 2+ chars
//   PATH   "/"-separated segments of [A-Za-z0-9._~-]; either a leading "/"
//          with 2+ segments, or 2+ segments whose last one has an extension
//   IDENT  a run of letters, digits and -_. of length >= 8 that contains at
//          least one letter and one digit
// Each entity is replaced by "__KIND_n__", with n counted per kind from 0 in
// left-to-right order.

enum class EntityKind { Email, Url, Path, Ident };

std::string_view entity_name(EntityKind kind);

struct Placeholder {
  std::string token;     // e.g. "__EMAIL_0__"
  std::string original;  // e.g. "john@doe.com"
  EntityKind kind = EntityKind::Email;

  bool operator==(const Placeholder&) const = default;
};

struct PlaceholderMap {
  std::vector<Placeholder> entries;  // in text order

  bool empty() const { return entries.empty(); }
  const Placeholder* find(std::string_view token) const;
  bool operator==(const PlaceholderMap&) const = default;
};

struct ExtractResult {
  std::string text;
  PlaceholderMap map;
};

ExtractResult extract_placeholders(std::string_view text);

// Throws DataError naming the first placeholder token missing from `map`.
std::string restore_placeholders(std::string_view text, const PlaceholderMap& map);

// True for strings of the exact form "__KIND_n__".
bool is_placeholder(std::string_view token);

// One JSON object per sentence: {"placeholders":[{"token":..,"original":..,
// "kind":..}, ...]}.
std::string placeholder_map_to_json(const PlaceholderMap& map);
PlaceholderMap placeholder_map_from_json(std::string_view json);

// ---------------------------------------------------------------------------
// Tokenisation.

Tokens tokenize(std::string_view text);
std::string detokenize(const Tokens& tokens);

// ---------------------------------------------------------------------------
// Truecasing.

class TruecaseModel {
 public:
  struct Entry {
    std::string cased;
    std::uint64_t count = 0;  // occurrences of `cased` at non-initial positions
    bool operator==(const Entry&) const = default;
  };

  // Adds one tokenized sentence to the training counts.
  void observe(const Tokens& tokens);
  // Picks, for every lowercase form, its most frequent cased variant.
  // Ties go to the all-lowercase form, then to the bytewise smallest.
  void finalize();

  const Entry* lookup(std::string_view lowercase) const;
  std::size_t size() const { return table_.size(); }
  const std::map<std::string, Entry, std::less<>>& table() const { return table_; }

  // "lowercase<TAB>cased<TAB>count" per line, sorted by lowercase form.
  void save(const std::string& path) const;
  static TruecaseModel load(const std::string& path);

  bool operator==(const TruecaseModel& o) const { return table_ == o.table_; }

 private:
  std::map<std::string, std::map<std::string, std::uint64_t>, std::less<>> counts_;
  std::map<std::string, Entry, std::less<>> table_;
};

TruecaseModel train_truecaser(const MonolingualCorpus& corpus);

// Rewrites the sentence-initial token to its table form when known.
Tokens truecase(const Tokens& tokens, const TruecaseModel& model);
// Uppercases the first alphabetic character of the first token.
Tokens detruecase(const Tokens& tokens);

}  // namespace mtprep

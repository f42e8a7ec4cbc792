#pragma once

// Random inputs for the round-trip properties, shared by the property tests
// and the acceptance binary.

#include <string>
#include <vector>

#include "mtprep/corpus.h"
#include "mtprep/rng.h"

namespace mtprep::gen {

inline const std::vector<std::string>& pieces() {
  static const std::vector<std::string> p = {
      "a", "Z", "k", "ē", "Š", "ų", "Ž", "õ", "К", "и", "ї", "Є", "ґ", "ж", "ь", "'", "’",
      "ʼ", "\"", "„", "“", "”", "«", "»", "-", "–", "—", "‐", ".", ",", "!", "?", ";", ":",
      "(", ")", "[", "]", "/", "@", "_", "__", "%", "0", "7", "9", "&", "|", "#", "€", "…",
      " ", " ", " ", "  ", "\t", "\u00a0", "\u2003", "\u3000", "\u200b"};
  return p;
}

inline const std::vector<std::string>& words() {
  static const std::vector<std::string> w = {
      "Київ",  "столиця", "України", "Kijiva", "ir",      "galvaspilsēta", "Vilnius",
      "Lietuvos", "sostinė", "Tallinn", "on",   "pealinn", "e-pasts",       "Кам'янське",
      "CamelCase", "ABC",   "x",      "1990",  "3.14",    "U.S.A.",        "don't",
      "Mr.",   "(vai",      "ne)",    "5%",    "D'Artagnan"};
  return w;
}

inline const std::vector<std::string>& entities() {
  static const std::vector<std::string> e = {
      "john@doe.com", "info@gov.ua", "a.b-c@mail.example.lt", "https://example.com/a?b=c",
      "http://tilde.lv", "www.uzt.lt/darbas", "/usr/local/bin", "docs/readme.txt",
      "C:/x", "AB12CD34", "ID-2022-0001", "v1.2.3-beta7", "__EMAIL_0__", "__URL_9__",
      "__x__", "foo@bar", "ftp://files.example.org/pub/", "see:", "A1b2C3d4e5"};
  return e;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

// Free-form text with typographic punctuation and odd whitespace.
inline std::string text(Rng& rng, std::size_t max_parts = 24) {
  std::string s;
  const auto n = rng.below(max_parts + 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    switch (rng.below(4)) {
      case 0: s += pick(rng, pieces()); break;
      case 1: s += pick(rng, words()); break;
      case 2: s += pick(rng, entities()); break;
      default: s += " "; break;
    }
  }
  return s;
}

// A single whitespace-free token built from letters, digits and punctuation,
// including the BPE joiner characters.
inline std::string token(Rng& rng) {
  static const std::vector<std::string> sym = {"a", "b", "ab", "ē", "К", "и", "ї", "@",
                                               "@@", "-", ".", "1", "'", "š", "ą", "õ"};
  std::string t;
  const auto n = 1 + rng.below(10);
  for (std::uint64_t i = 0; i < n; ++i) t += pick(rng, sym);
  return t;
}

inline Tokens tokens(Rng& rng, std::size_t max_len = 12) {
  Tokens t;
  const auto n = rng.below(max_len + 1);
  for (std::uint64_t i = 0; i < n; ++i) t.push_back(rng.below(3) ? token(rng) : pick(rng, words()));
  return t;
}

inline FactoredSentence factored(Rng& rng) {
  FactoredSentence s;
  const Factor fs[] = {Factor::Src, Factor::TermSrc, Factor::TermTgt, Factor::Unk};
  for (const auto& t : tokens(rng)) s.push_back({t, fs[rng.below(4)]});
  return s;
}

inline Alignment alignment(Rng& rng) {
  Alignment a;
  const auto n = rng.below(20);
  for (std::uint64_t i = 0; i < n; ++i)
    a.add({static_cast<std::uint32_t>(rng.below(120)), static_cast<std::uint32_t>(rng.below(120))});
  return a;
}

}  // namespace mtprep::gen

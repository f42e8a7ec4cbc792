#include <gtest/gtest.h>

#include "mtprep/error.h"
#include "mtprep/textnorm.h"
#include "mtprep/utf8.h"
#include "test_util.h"

using namespace mtprep;
using mtprep::testing::TempDir;
using mtprep::testing::write_file;

TEST(Normalize, QuotesDashesAndSpaces) {
  EXPECT_EQ(normalize("«Київ»  — столиця"), "\"Київ\" - столиця");
  EXPECT_EQ(normalize("a  b"), "a b");
  EXPECT_EQ(normalize("„x“ ”y‟"), "\"x\" \"y\"");
  EXPECT_EQ(normalize("Кам’янське ‘a’ ʼb´ `c"), "Кам'янське 'a' 'b' 'c");
  EXPECT_EQ(normalize("a‐b‑c‒d–e—f―g"), "a-b-c-d-e-f-g");
}

TEST(Normalize, TrimsAndCollapsesUnicodeWhitespace) {
  EXPECT_EQ(normalize("\t a  　 b \n"), "a b");
  EXPECT_EQ(normalize("   "), "");
  EXPECT_EQ(normalize(""), "");
}

TEST(Normalize, Idempotent) {
  for (std::string s : {"«Київ»  — столиця", " a b ", "x — y — z", "plain"})
    EXPECT_EQ(normalize(normalize(s)), normalize(s));
}

TEST(Placeholders, Email) {
  auto r = extract_placeholders("Write to john@doe.com now");
  EXPECT_EQ(r.text, "Write to __EMAIL_0__ now");
  ASSERT_EQ(r.map.entries.size(), 1u);
  EXPECT_EQ(r.map.entries[0], (Placeholder{"__EMAIL_0__", "john@doe.com", EntityKind::Email}));
}

TEST(Placeholders, Url) {
  auto r = extract_placeholders("See https://uzt.lt/help");
  EXPECT_EQ(r.text, "See __URL_0__");
  EXPECT_EQ(r.map.entries.at(0).original, "https://uzt.lt/help");
  EXPECT_EQ(r.map.entries.at(0).kind, EntityKind::Url);
}

TEST(Placeholders, UrlStripsTrailingPunctuation) {
  auto r = extract_placeholders("Visit www.ldb.lt, or http://x.org/a?b=1.");
  EXPECT_EQ(r.text, "Visit __URL_0__, or __URL_1__.");
  EXPECT_EQ(r.map.entries.at(0).original, "www.ldb.lt");
  EXPECT_EQ(r.map.entries.at(1).original, "http://x.org/a?b=1");
}

TEST(Placeholders, NoMatch) {
  auto r = extract_placeholders("plain text");
  EXPECT_EQ(r.text, "plain text");
  EXPECT_TRUE(r.map.empty());
}

TEST(Placeholders, PathsAndIdentifiers) {
  auto r = extract_placeholders("Open /etc/hosts and docs/readme.md with key AB12-CD34x");
  EXPECT_EQ(r.text, "Open __PATH_0__ and __PATH_1__ with key __IDENT_0__");
  EXPECT_EQ(r.map.entries.at(0).original, "/etc/hosts");
  EXPECT_EQ(r.map.entries.at(1).original, "docs/readme.md");
  EXPECT_EQ(r.map.entries.at(2).original, "AB12-CD34x");
}

TEST(Placeholders, ShortOrPlainTokensAreNotEntities) {
  EXPECT_TRUE(extract_placeholders("and/or a/b abc12 2022-05-09 ABCDEFGHIJ").map.empty());
}

TEST(Placeholders, UrlBeatsEmailAndCountsPerKind) {
  auto r = extract_placeholders("a@b.lv https://u:p@c.lv d@e.lt");
  EXPECT_EQ(r.text, "__EMAIL_0__ __URL_0__ __EMAIL_1__");
}

TEST(Placeholders, Restore) {
  auto r = extract_placeholders("Write to john@doe.com now");
  EXPECT_EQ(restore_placeholders(r.text, r.map), "Write to john@doe.com now");
  EXPECT_EQ(restore_placeholders("nothing here", {}), "nothing here");
}

TEST(Placeholders, RestoreUnknownTokenNamesIt) {
  try {
    restore_placeholders("__EMAIL_9__", {});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("__EMAIL_9__"), std::string::npos);
  }
}

TEST(Placeholders, LiteralPlaceholderTextSurvivesRoundTrip) {
  const std::string text = "keep __EMAIL_0__ literally, mail a@b.lv";
  auto r = extract_placeholders(text);
  EXPECT_EQ(restore_placeholders(r.text, r.map), text);
}

TEST(Placeholders, JsonSidecarRoundTrip) {
  auto r = extract_placeholders("Mail john@doe.com or see https://uzt.lt");
  const auto json = placeholder_map_to_json(r.map);
  EXPECT_EQ(placeholder_map_from_json(json), r.map);
  EXPECT_EQ(placeholder_map_to_json({}), "{\"placeholders\":[]}");
  EXPECT_THROW(placeholder_map_from_json("{\"x\":1}"), DataError);
}

TEST(Placeholders, IsPlaceholder) {
  EXPECT_TRUE(is_placeholder("__EMAIL_0__"));
  EXPECT_TRUE(is_placeholder("__IDENT_12__"));
  EXPECT_FALSE(is_placeholder("__EMAIL__"));
  EXPECT_FALSE(is_placeholder("__FOO_1__"));
  EXPECT_FALSE(is_placeholder("__EMAIL_0__x"));
}

TEST(Tokenize, SplitsPunctuation) {
  EXPECT_EQ(tokenize("Київ, Харків."), (Tokens{"Київ", ",", "Харків", "."}));
}

TEST(Tokenize, PlaceholderStaysAtomic) {
  EXPECT_EQ(tokenize("__EMAIL_0__."), (Tokens{"__EMAIL_0__", "."}));
}

TEST(Tokenize, InternalApostropheAndHyphenKept) {
  EXPECT_EQ(tokenize("Кам'янське"), (Tokens{"Кам'янське"}));
  EXPECT_EQ(tokenize("e-pasts: x"), (Tokens{"e-pasts", ":", "x"}));
  EXPECT_EQ(tokenize("'quoted'"), (Tokens{"'", "quoted", "'"}));
  EXPECT_EQ(tokenize("a - b"), (Tokens{"a", "-", "b"}));
}

TEST(Tokenize, DecimalNumbersKeepSeparators) {
  EXPECT_EQ(tokenize("3,5 km 1.000.000 x."), (Tokens{"3,5", "km", "1.000.000", "x", "."}));
  EXPECT_EQ(tokenize("2022."), (Tokens{"2022", "."}));
}

TEST(Detokenize, Rules) {
  EXPECT_EQ(detokenize({"Київ", ",", "Харків", "."}), "Київ, Харків.");
  EXPECT_EQ(detokenize({}), "");
  EXPECT_EQ(detokenize({"(", "a", ")"}), "(a)");
  EXPECT_EQ(detokenize({"Kas", "?", "Jā", "!"}), "Kas? Jā!");
}

TEST(Detokenize, StableUnderOneRoundTrip) {
  for (std::string s : {"Київ, Харків.", "(a) b; c: d!", "a ( b", "x , , y"}) {
    auto t = tokenize(s);
    EXPECT_EQ(tokenize(detokenize(t)), t) << s;
  }
}

TEST(Truecaser, CountsNonInitialPositionsOnly) {
  auto m = train_truecaser({"lv", {"Kijiva ir pilsēta", "mēs redzam Kijiva"}});
  ASSERT_NE(m.lookup("kijiva"), nullptr);
  EXPECT_EQ(m.lookup("kijiva")->cased, "Kijiva");
  EXPECT_EQ(m.lookup("kijiva")->count, 1u);
  EXPECT_EQ(m.lookup("mēs"), nullptr);
}

TEST(Truecaser, LowercaseBeatsAbsentInitialForm) {
  auto m = train_truecaser({"en", {"The the the"}});
  ASSERT_NE(m.lookup("the"), nullptr);
  EXPECT_EQ(m.lookup("the")->cased, "the");
  EXPECT_EQ(m.lookup("the")->count, 2u);
}

TEST(Truecaser, TiesPreferLowercaseThenSmallest) {
  auto m = train_truecaser({"en", {"x Riga riga", "x RIGA Riga"}});
  EXPECT_EQ(m.lookup("riga")->cased, "Riga");  // Riga 2, riga 1, RIGA 1
  auto tie = train_truecaser({"en", {"x Riga riga"}});
  EXPECT_EQ(tie.lookup("riga")->cased, "riga");
  auto upper = train_truecaser({"en", {"x Riga RIGA"}});
  EXPECT_EQ(upper.lookup("riga")->cased, "RIGA");
}

TEST(Truecaser, EmptyCorpusGivesEmptyModel) {
  EXPECT_EQ(train_truecaser({"lv", {}}).size(), 0u);
}

TEST(Truecaser, KeysAreLowercaseOfValues) {
  auto m = train_truecaser({"uk", {"До Києва і Харкова", "Ми бачили Київ та ЛЬВІВ"}});
  for (const auto& [lc, e] : m.table()) EXPECT_EQ(utf8::lower(e.cased), lc);
}

TEST(Truecase, InitialTokenOnly) {
  auto m = train_truecaser({"lv", {"x mēs", "y Kijiva"}});
  EXPECT_EQ(truecase({"Mēs", "redzam"}, m), (Tokens{"mēs", "redzam"}));
  EXPECT_EQ(truecase({"kijiva", "Mēs"}, m), (Tokens{"Kijiva", "Mēs"}));
  EXPECT_EQ(truecase({"Nezināms", "x"}, m), (Tokens{"Nezināms", "x"}));
  EXPECT_TRUE(truecase({}, m).empty());
}

TEST(Detruecase, UppercasesFirstLetter) {
  EXPECT_EQ(detruecase({"mēs", "redzam"}), (Tokens{"Mēs", "redzam"}));
  EXPECT_EQ(detruecase({"\"", "київ"}), (Tokens{"\"", "київ"}));
  EXPECT_EQ(detruecase({"«ж»"}), (Tokens{"«Ж»"}));
  EXPECT_EQ(detruecase({"ļviva"}), (Tokens{"Ļviva"}));
}

TEST(TruecaseModel, SaveLoadRoundTrip) {
  TempDir dir;
  auto m = train_truecaser({"lv", {"x Kijiva ir", "y Ļviva Ir ir"}});
  m.save(dir.file("tc"));
  EXPECT_EQ(TruecaseModel::load(dir.file("tc")), m);
  EXPECT_EQ(mtprep::testing::read_file(dir.file("tc")), "ir\tir\t2\nkijiva\tKijiva\t1\nļviva\tĻviva\t1\n");
}

TEST(TruecaseModel, LoadRejectsMalformedRecords) {
  TempDir dir;
  write_file(dir.file("a"), "kijiva\tKijiva\n");
  EXPECT_THROW(TruecaseModel::load(dir.file("a")), DataError);
  write_file(dir.file("b"), "kijiva\tKijiva\tx\n");
  EXPECT_THROW(TruecaseModel::load(dir.file("b")), DataError);
  write_file(dir.file("c"), "riga\tKijiva\t1\n");
  EXPECT_THROW(TruecaseModel::load(dir.file("c")), DataError);
}

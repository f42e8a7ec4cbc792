#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "test_util.h"

using mtprep::testing::data_path;
using mtprep::testing::glossary_path;
using mtprep::testing::read_file;
using mtprep::testing::TempDir;
using mtprep::testing::write_file;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string("'") + MTPREP_CLI_PATH + "' " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST(Cli, VersionAndHelp) {
  EXPECT_EQ(cli("--version").code, 0);
  EXPECT_EQ(cli("--help").code, 0);
  for (const char* sub : {"filter", "preprocess", "postprocess", "train-truecase", "truecase",
                          "align", "train-bpe", "apply-bpe", "augment-unk", "augment-bt",
                          "augment unk", "augment bt", "annotate", "evaluate", "significance",
                          "usage-report", "run"}) {
    auto r = cli(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
  EXPECT_EQ(cli("evaluate --metric chrf --bogus").code, 1);
  EXPECT_EQ(cli("evaluate --metric chrf").code, 1);
  EXPECT_EQ(cli("evaluate --metric comet --hyp " + q(data_path("parity.hyp")) + " --ref " +
                   q(data_path("parity.ref")))
                .code,
            1);
}

TEST(Cli, EvaluatePrintsScoreAndSignature) {
  auto r = cli("evaluate --metric chrf --hyp " + q(data_path("parity.hyp")) + " --ref " +
                  q(data_path("parity.ref")));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "81.3\tnrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|version:" MTPREP_VERSION
                   "\n");
  auto full = cli("evaluate --metric bleu --full-precision --hyp " +
                     q(data_path("parity.hyp")) + " --ref " + q(data_path("parity.ref")));
  ASSERT_EQ(full.code, 0);
  EXPECT_NEAR(std::stod(full.out), 71.3601355815472, 1e-6);
}

TEST(Cli, ExitCodesForDataAndIo) {
  TempDir dir;
  write_file(dir.file("h"), "a\nb\n");
  write_file(dir.file("r"), "a\n");
  EXPECT_EQ(cli("filter --src /nonexistent/x --tgt /nonexistent/y --src-lang uk --tgt-lang lv "
                   "--out-src " + q(dir.file("o1")) + " --out-tgt " + q(dir.file("o2")))
                .code,
            3);
  EXPECT_EQ(cli("filter --src " + q(dir.file("h")) + " --tgt " + q(dir.file("r")) +
                   " --src-lang uk --tgt-lang lv --out-src " + q(dir.file("o1")) + " --out-tgt " +
                   q(dir.file("o2")))
                .code,
            2);
  write_file(dir.file("bad.tsv"), "Київ\n");
  EXPECT_EQ(cli("annotate --lang-pair uk-lv --glossary " + q(dir.file("bad.tsv")) +
                   " --in /dev/null")
                .code,
            2);
}

TEST(Cli, FilterReportOnStdout) {
  TempDir dir;
  write_file(dir.file("s"), "Київ — столиця.\n\nКиїв — столиця.\n");
  write_file(dir.file("t"), "Kijiva ir galvaspilsēta.\nTukšs\nKijiva ir galvaspilsēta.\n");
  auto r = cli("filter --src " + q(dir.file("s")) + " --tgt " + q(dir.file("t")) +
                  " --src-lang uk --tgt-lang lv --out-src " + q(dir.file("os")) + " --out-tgt " +
                  q(dir.file("ot")) + " --report -");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["input"], 3);
  EXPECT_EQ(j["kept"], 1);
  EXPECT_EQ(j["rejected"]["non-empty"], 1);
  EXPECT_EQ(j["rejected"]["dedup"], 1);
  EXPECT_EQ(read_file(dir.file("os")), "Київ — столиця.\n");
}

TEST(Cli, AnnotateTableFive) {
  TempDir dir;
  write_file(dir.file("in"),
             "Київ, Харків, Одеса, Дніпро і Донецьк мають пять найбільших українських міст.\n");
  auto r = cli("annotate --lang-pair uk-lv --glossary " + q(glossary_path("uk-lv.tsv")) +
                  " --in " + q(dir.file("in")));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Київ|TERM-SRC Kijiva|TERM-TGT"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Донецьк|TERM-SRC Donecka|TERM-TGT"), std::string::npos) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Cli, PreprocessPostprocessStreamRoundTrip) {
  TempDir dir;
  const std::string text =
      "Rakstiet uz info@gov.ua vai apmeklējiet https://tilde.lv/uk!\n"
      "Kijiva ir Ukrainas galvaspilsēta (kopš 1991).\n";
  write_file(dir.file("in"), text);
  ASSERT_EQ(cli("preprocess --no-normalize --in " + q(dir.file("in")) + " --placeholders " +
                   q(dir.file("ph")) + " --out " + q(dir.file("tok")))
                .code,
            0);
  const auto tok = read_file(dir.file("tok"));
  EXPECT_NE(tok.find("__EMAIL_0__"), std::string::npos);
  EXPECT_NE(tok.find("__URL_0__"), std::string::npos);
  auto r = cli("postprocess --no-detruecase --placeholders " + q(dir.file("ph")) + " < " +
                  q(dir.file("tok")));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, text);
}

TEST(Cli, TrainAndApplyBpe) {
  TempDir dir;
  write_file(dir.file("c"), "Kijiva ir galvaspilsēta\nKijiva un Harkiva\n");
  ASSERT_EQ(cli("train-bpe --in " + q(dir.file("c")) + " --merges 10 --model " +
                   q(dir.file("m")))
                .code,
            0);
  EXPECT_EQ(read_file(dir.file("m")).rfind("#bpe v1", 0), 0u);
  auto r = cli("apply-bpe --model " + q(dir.file("m")) + " --in " + q(dir.file("c")));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("@@"), std::string::npos);
}

TEST(Cli, UsageReportCsv) {
  TempDir dir;
  write_file(dir.file("log"),
             "{\"timestamp\":\"2022-03-01T10:00:00Z\",\"system_id\":\"lt-uk\",\"channel\":"
             "\"widget\",\"client_domain\":\"uzt.lt\",\"sentence_count\":12}\nbroken\n");
  auto r = cli("usage-report --logs " + q(dir.file("log")) +
                  " --system lt-uk --from 2022-03-01 --to 2022-03-02");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "date,system,sentences\n2022-03-01,lt-uk,12\n2022-03-02,lt-uk,0\n");
  EXPECT_EQ(cli("usage-report --logs " + q(dir.file("log")) +
                   " --system lt-uk --from 2022-03-02 --to 2022-03-01")
                .code,
            1);
}

TEST(Cli, SignificanceLine) {
  auto r = cli("significance --metric chrf --samples 200 --sys-a " +
                  q(data_path("parity.ref")) + " --sys-b " + q(data_path("parity.ref")) +
                  " --ref " + q(data_path("parity.ref")));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("metric\tchrf\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("\nsignificant\tno\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\nmean_diff\t0.0000\n"), std::string::npos) << r.out;
}

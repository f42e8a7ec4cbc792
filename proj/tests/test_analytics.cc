#include <gtest/gtest.h>

#include <numeric>

#include "mtprep/analytics.h"
#include "mtprep/error.h"
#include "test_util.h"

using namespace mtprep;
using namespace std::chrono;
using mtprep::testing::TempDir;
using mtprep::testing::write_file;

namespace {

UsageRecord rec(std::string_view day, std::string sys, Channel ch, std::string client,
                std::uint64_t n, int hour = 12) {
  UsageRecord r;
  r.timestamp = sys_days{parse_date(day)} + hours{hour};
  r.system_id = std::move(sys);
  r.channel = ch;
  r.client_domain = std::move(client);
  r.sentence_count = n;
  return r;
}

std::string line(std::string_view ts, std::string_view sys, std::string_view ch,
                 std::string_view client, std::uint64_t n) {
  return "{\"timestamp\":\"" + std::string(ts) + "\",\"system_id\":\"" + std::string(sys) +
         "\",\"channel\":\"" + std::string(ch) + "\",\"client_domain\":\"" + std::string(client) +
         "\",\"sentence_count\":" + std::to_string(n) + "}";
}

}  // namespace

TEST(ParseUsageLine, ValidRecord) {
  auto r = parse_usage_line(line("2022-03-01T10:00:00Z", "lt-uk", "widget", "uzt.lt", 12));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->system_id, "lt-uk");
  EXPECT_EQ(r->channel, Channel::Widget);
  EXPECT_EQ(r->client_domain, "uzt.lt");
  EXPECT_EQ(r->sentence_count, 12u);
  EXPECT_EQ(format_date(r->date()), "2022-03-01");
  EXPECT_EQ(parse_usage_line(usage_record_to_json(*r)), r);
}

TEST(ParseUsageLine, OffsetsAndFractions) {
  auto a = parse_usage_line(line("2022-03-01T23:59:59.250+00:00", "uk-lv", "api", "", 1));
  ASSERT_TRUE(a);
  EXPECT_EQ(format_date(a->date()), "2022-03-01");
}

TEST(ParseUsageLine, RejectsInvalid) {
  EXPECT_FALSE(parse_usage_line("not json"));
  EXPECT_FALSE(parse_usage_line("[1,2]"));
  EXPECT_FALSE(parse_usage_line(line("2022-03-01T10:00:00Z", "ltuk", "widget", "", 1)));
  EXPECT_FALSE(parse_usage_line(line("2022-03-01T10:00:00Z", "LT-UK", "widget", "", 1)));
  EXPECT_FALSE(parse_usage_line(line("2022-03-01T10:00:00Z", "lt-uk", "fax", "", 1)));
  EXPECT_FALSE(parse_usage_line(line("2022-03-01T10:00:00Z", "lt-uk", "widget", "", 0)));
  EXPECT_FALSE(parse_usage_line(line("2022-02-30T10:00:00Z", "lt-uk", "widget", "", 1)));
  EXPECT_FALSE(parse_usage_line(line("2022-03-01T10:00:00+02:00", "lt-uk", "widget", "", 1)));
  EXPECT_FALSE(parse_usage_line(
      R"({"timestamp":"2022-03-01T10:00:00Z","system_id":"lt-uk","channel":"api","sentence_count":-3})"));
}

TEST(IngestLines, CountsMalformedAndKeepsOrder) {
  std::vector<std::string> lines{
      line("2022-03-01T10:00:00Z", "lt-uk", "widget", "uzt.lt", 5), "{broken",
      "", line("2022-03-02T10:00:00Z", "lt-uk", "api", "", 7),
      line("2022-03-03T10:00:00Z", "lt-uk", "platform", "ldb.lt", 1)};
  auto r = ingest_lines(lines);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.malformed_count, 1u);
  EXPECT_EQ(r.malformed_lines, (std::vector<std::size_t>{2}));
  EXPECT_EQ(r.records[0].sentence_count, 5u);
  EXPECT_EQ(r.records[2].client_domain, "ldb.lt");
}

TEST(IngestLogs, FileAndErrors) {
  TempDir dir;
  write_file(dir.file("log"), line("2022-03-01T10:00:00Z", "lt-uk", "widget", "", 5) + "\nxx\n");
  auto r = ingest_logs(dir.file("log"));
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.malformed_count, 1u);
  write_file(dir.file("empty"), "");
  EXPECT_TRUE(ingest_logs(dir.file("empty")).records.empty());
  EXPECT_THROW(ingest_logs(dir.file("missing")), IoError);
}

TEST(AggregateDaily, SumsAndZeroFills) {
  std::vector<UsageRecord> rs{rec("2022-03-02", "lt-uk", Channel::Widget, "", 5),
                              rec("2022-03-02", "lt-uk", Channel::Api, "", 7, 23),
                              rec("2022-03-04", "lt-uk", Channel::Widget, "", 1),
                              rec("2022-03-04", "uk-lt", Channel::Widget, "", 100),
                              rec("2022-02-28", "lt-uk", Channel::Widget, "", 50)};
  auto d = aggregate_daily(rs, "lt-uk", parse_date("2022-03-01"), parse_date("2022-03-04"));
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(format_date(d[0].first), "2022-03-01");
  EXPECT_EQ(d[0].second, 0u);
  EXPECT_EQ(d[1].second, 12u);
  EXPECT_EQ(d[2].second, 0u);
  EXPECT_EQ(d[3].second, 1u);
}

TEST(AggregateDaily, InvertedRange) {
  EXPECT_THROW(aggregate_daily({}, "lt-uk", parse_date("2022-03-02"), parse_date("2022-03-01")),
               ConfigError);
  EXPECT_EQ(aggregate_daily({}, "lt-uk", parse_date("2022-03-01"), parse_date("2022-03-01")).size(),
            1u);
}

TEST(ParseDate, Validation) {
  EXPECT_EQ(format_date(parse_date("2024-02-29")), "2024-02-29");
  EXPECT_THROW(parse_date("2023-02-29"), ConfigError);
  EXPECT_THROW(parse_date("2023-2-1"), ConfigError);
  EXPECT_THROW(parse_date("yesterday"), ConfigError);
}

TEST(TopClients, RankingAndUnknown) {
  std::vector<UsageRecord> rs{rec("2022-03-01", "lt-uk", Channel::Widget, "uzt.lt", 10),
                              rec("2022-03-01", "lt-uk", Channel::Widget, "ldb.lt", 7),
                              rec("2022-03-01", "lt-uk", Channel::Widget, "paslaugos.vilnius.lt", 3)};
  using V = std::vector<std::pair<std::string, std::uint64_t>>;
  EXPECT_EQ(top_clients(rs, "lt-uk", 2), (V{{"uzt.lt", 10}, {"ldb.lt", 7}}));
  EXPECT_EQ(top_clients(rs, "lt-uk", 10).size(), 3u);
  EXPECT_TRUE(top_clients({}, "lt-uk", 3).empty());
  EXPECT_THROW(top_clients(rs, "lt-uk", 0), ConfigError);
  rs.push_back(rec("2022-03-01", "lt-uk", Channel::Api, "", 4));
  rs.push_back(rec("2022-03-02", "lt-uk", Channel::Api, "", 4));
  EXPECT_EQ(top_clients(rs, "lt-uk", 2), (V{{"uzt.lt", 10}, {"(unknown)", 8}}));
}

TEST(TopClients, TiesLexicographic) {
  std::vector<UsageRecord> rs{rec("2022-03-01", "lt-uk", Channel::Widget, "b.lt", 5),
                              rec("2022-03-01", "lt-uk", Channel::Widget, "c.lt", 5),
                              rec("2022-03-01", "lt-uk", Channel::Widget, "a.lt", 5)};
  auto t = top_clients(rs, "lt-uk", 3);
  EXPECT_EQ(t[0].first, "a.lt");
  EXPECT_EQ(t[1].first, "b.lt");
  EXPECT_EQ(t[2].first, "c.lt");
}

TEST(ChannelBreakdown, Sums) {
  std::vector<UsageRecord> rs{rec("2022-03-01", "lt-uk", Channel::Widget, "", 10),
                              rec("2022-03-01", "lt-uk", Channel::PublicWeb, "", 3),
                              rec("2022-03-02", "lt-uk", Channel::Widget, "", 2),
                              rec("2022-03-02", "uk-lt", Channel::Api, "", 99)};
  EXPECT_EQ(channel_breakdown(rs, "lt-uk"),
            (std::map<std::string, std::uint64_t>{{"public-web", 3}, {"widget", 12}}));
  EXPECT_TRUE(channel_breakdown({}, "lt-uk").empty());
}

TEST(Report, CsvAndJsonRoundTrip) {
  std::vector<UsageRecord> rs{rec("2022-03-01", "lt-uk", Channel::Widget, "uzt.lt", 10),
                              rec("2022-03-03", "lt-uk", Channel::Platform, "", 2),
                              rec("2022-04-01", "lt-uk", Channel::Widget, "late.lt", 1000)};
  auto rep = build_report(rs, "lt-uk", parse_date("2022-03-01"), parse_date("2022-03-03"), 5);
  EXPECT_EQ(rep.total, 12u);
  EXPECT_EQ(rep.clients.size(), 2u);
  EXPECT_EQ(render_report(rep, ReportFormat::Csv),
            "date,system,sentences\n2022-03-01,lt-uk,10\n2022-03-02,lt-uk,0\n"
            "2022-03-03,lt-uk,2\n");
  EXPECT_EQ(parse_report_json(render_report(rep, ReportFormat::Json)), rep);
  EXPECT_THROW(parse_report_json("{}"), DataError);
  EXPECT_THROW(parse_report_format("xml"), ConfigError);
}

TEST(Report, ConservationAcrossBreakdowns) {
  std::vector<UsageRecord> rs;
  const Channel chans[] = {Channel::PublicWeb, Channel::Widget, Channel::Api, Channel::Platform};
  const char* clients[] = {"uzt.lt", "ldb.lt", "", "vu.lt", "lrt.lt"};
  for (int i = 0; i < 2000; ++i) {
    auto day = sys_days{parse_date("2022-03-01")} + days{i % 60};
    UsageRecord r;
    r.timestamp = day + seconds{(i * 7919) % 86400};
    r.system_id = i % 9 == 0 ? "uk-lt" : "lt-uk";
    r.channel = chans[i % 4];
    r.client_domain = clients[(i * 3) % 5];
    r.sentence_count = 1 + (i * 37) % 500;
    rs.push_back(r);
  }
  auto rep = build_report(rs, "lt-uk", parse_date("2022-03-01"), parse_date("2022-04-29"), 100);
  std::uint64_t expected = 0;
  for (const auto& r : rs)
    if (r.system_id == "lt-uk") expected += r.sentence_count;
  auto sum = [](const auto& v) {
    return std::accumulate(v.begin(), v.end(), std::uint64_t{0},
                           [](std::uint64_t a, const auto& p) { return a + p.second; });
  };
  EXPECT_EQ(rep.total, expected);
  EXPECT_EQ(sum(rep.daily), expected);
  EXPECT_EQ(sum(rep.channels), expected);
  EXPECT_EQ(sum(rep.clients), expected);
}

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mtprep {

enum class Channel { PublicWeb, Widget, Api, Platform };

std::string_view channel_name(Channel c);
std::optional<Channel> parse_channel(std::string_view name);

using Date = std::chrono::year_month_day;

// "YYYY-MM-DD"; throws ConfigError otherwise.
Date parse_date(std::string_view text);
std::string format_date(Date d);

struct UsageRecord {
  std::chrono::sys_seconds timestamp;
  std::string system_id;  // "xx-yy"
  Channel channel = Channel::PublicWeb;
  std::string client_domain;  // may be empty
  std::uint64_t sentence_count = 1;

  Date date() const;
  bool operator==(const UsageRecord&) const = default;
};

// One JSON object: {"timestamp":"2022-03-01T10:00:00Z","system_id":"lt-uk",
// "channel":"widget","client_domain":"uzt.lt","sentence_count":12}.
// nullopt when the line does not describe a valid record.
std::optional<UsageRecord> parse_usage_line(std::string_view line);
std::string usage_record_to_json(const UsageRecord& r);

struct IngestResult {
  std::vector<UsageRecord> records;
  std::size_t malformed_count = 0;
  std::vector<std::size_t> malformed_lines;  // 1-based
};

// Blank lines are ignored; other unparseable lines are counted and skipped.
IngestResult ingest_logs(const std::string& path);
IngestResult ingest_lines(const std::vector<std::string>& lines);

using DailySeries = std::vector<std::pair<Date, std::uint64_t>>;

// Every date of [from, to] in order, zero when there was no traffic.
DailySeries aggregate_daily(const std::vector<UsageRecord>& records,
                            std::string_view system_id, Date from, Date to);

inline constexpr std::string_view kUnknownClient = "(unknown)";

std::vector<std::pair<std::string, std::uint64_t>> top_clients(
    const std::vector<UsageRecord>& records, std::string_view system_id, std::size_t k);

std::map<std::string, std::uint64_t> channel_breakdown(const std::vector<UsageRecord>& records,
                                                       std::string_view system_id);

struct UsageReport {
  std::string system_id;
  Date from;
  Date to;
  std::uint64_t total = 0;
  DailySeries daily;
  std::map<std::string, std::uint64_t> channels;
  std::vector<std::pair<std::string, std::uint64_t>> clients;

  bool operator==(const UsageReport&) const = default;
};

// Restricted to records of `system_id` dated within [from, to].
UsageReport build_report(const std::vector<UsageRecord>& records, std::string_view system_id,
                         Date from, Date to, std::size_t top_k);

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(std::string_view name);
// CSV is "date,system,sentences" plus one row per day.
std::string render_report(const UsageReport& report, ReportFormat format);
UsageReport parse_report_json(std::string_view json);

}  // namespace mtprep

#include "mtprep/analytics.h"

#include <algorithm>
#include <charconv>
#include <json.hpp>

#include "mtprep/corpus.h"
#include "mtprep/error.h"

namespace mtprep {

using namespace std::chrono;

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::PublicWeb: return "public-web";
    case Channel::Widget: return "widget";
    case Channel::Api: return "api";
    case Channel::Platform: return "platform";
  }
  return "public-web";
}

std::optional<Channel> parse_channel(std::string_view name) {
  for (auto c : {Channel::PublicWeb, Channel::Widget, Channel::Api, Channel::Platform})
    if (channel_name(c) == name) return c;
  return std::nullopt;
}

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::optional<Date> try_parse_date(std::string_view t) {
  if (t.size() != 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
  int y, m, d;
  if (!parse_int(t.substr(0, 4), y) || !parse_int(t.substr(5, 2), m) ||
      !parse_int(t.substr(8, 2), d))
    return std::nullopt;
  Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

// "YYYY-MM-DDTHH:MM:SS[.fff](Z|+00:00)"
std::optional<sys_seconds> parse_timestamp(std::string_view t) {
  if (t.size() < 20 || t[10] != 'T' || t[13] != ':' || t[16] != ':') return std::nullopt;
  auto date = try_parse_date(t.substr(0, 10));
  int hh, mm, ss;
  if (!date || !parse_int(t.substr(11, 2), hh) || !parse_int(t.substr(14, 2), mm) ||
      !parse_int(t.substr(17, 2), ss) || hh > 23 || mm > 59 || ss > 60)
    return std::nullopt;
  std::string_view rest = t.substr(19);
  if (!rest.empty() && rest[0] == '.') {
    std::size_t k = 1;
    while (k < rest.size() && rest[k] >= '0' && rest[k] <= '9') ++k;
    if (k == 1) return std::nullopt;
    rest = rest.substr(k);
  }
  if (rest != "Z" && rest != "+00:00") return std::nullopt;
  return sys_days{*date} + hours{hh} + minutes{mm} + seconds{ss};
}

bool valid_system_id(std::string_view s) {
  if (s.size() != 5 || s[2] != '-') return false;
  for (std::size_t i : {0, 1, 3, 4})
    if (s[i] < 'a' || s[i] > 'z') return false;
  return true;
}

std::string format_timestamp(sys_seconds ts) {
  const auto days = floor<std::chrono::days>(ts);
  const hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(Date{days}).c_str(),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace

Date parse_date(std::string_view text) {
  auto d = try_parse_date(text);
  if (!d) throw ConfigError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  return *d;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date UsageRecord::date() const { return Date{floor<days>(timestamp)}; }

std::optional<UsageRecord> parse_usage_line(std::string_view line) {
  const auto doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  auto str = [&](const char* key) -> const std::string* {
    auto it = doc.find(key);
    return it != doc.end() && it->is_string() ? it->get_ptr<const std::string*>() : nullptr;
  };
  UsageRecord r;
  const auto* ts = str("timestamp");
  const auto* sys = str("system_id");
  const auto* ch = str("channel");
  if (!ts || !sys || !ch) return std::nullopt;
  auto when = parse_timestamp(*ts);
  auto channel = parse_channel(*ch);
  if (!when || !channel || !valid_system_id(*sys)) return std::nullopt;
  r.timestamp = *when;
  r.system_id = *sys;
  r.channel = *channel;
  if (auto it = doc.find("client_domain"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) return std::nullopt;
    r.client_domain = it->get<std::string>();
  }
  auto cnt = doc.find("sentence_count");
  if (cnt == doc.end() || !cnt->is_number_unsigned()) return std::nullopt;
  r.sentence_count = cnt->get<std::uint64_t>();
  if (r.sentence_count < 1) return std::nullopt;
  return r;
}

std::string usage_record_to_json(const UsageRecord& r) {
  nlohmann::ordered_json doc;
  doc["timestamp"] = format_timestamp(r.timestamp);
  doc["system_id"] = r.system_id;
  doc["channel"] = channel_name(r.channel);
  doc["client_domain"] = r.client_domain;
  doc["sentence_count"] = r.sentence_count;
  return doc.dump();
}

IngestResult ingest_lines(const std::vector<std::string>& lines) {
  IngestResult out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    if (auto r = parse_usage_line(lines[i])) {
      out.records.push_back(std::move(*r));
    } else {
      ++out.malformed_count;
      out.malformed_lines.push_back(i + 1);
    }
  }
  return out;
}

IngestResult ingest_logs(const std::string& path) { return ingest_lines(read_lines(path)); }

DailySeries aggregate_daily(const std::vector<UsageRecord>& records,
                            std::string_view system_id, Date from, Date to) {
  if (sys_days{to} < sys_days{from})
    throw ConfigError("date range is inverted: " + format_date(from) + " > " + format_date(to));
  const auto first = sys_days{from};
  const auto n = static_cast<std::size_t>((sys_days{to} - first).count()) + 1;
  std::vector<std::uint64_t> totals(n, 0);
  for (const auto& r : records) {
    if (r.system_id != system_id) continue;
    const auto d = floor<days>(r.timestamp);
    if (d < first || d > sys_days{to}) continue;
    totals[static_cast<std::size_t>((d - first).count())] += r.sentence_count;
  }
  DailySeries out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(Date{first + days{i}}, totals[i]);
  return out;
}

std::vector<std::pair<std::string, std::uint64_t>> top_clients(
    const std::vector<UsageRecord>& records, std::string_view system_id, std::size_t k) {
  if (k < 1) throw ConfigError("top-clients k must be >= 1");
  std::map<std::string, std::uint64_t> totals;
  for (const auto& r : records)
    if (r.system_id == system_id)
      totals[r.client_domain.empty() ? std::string(kUnknownClient) : r.client_domain] +=
          r.sentence_count;
  std::vector<std::pair<std::string, std::uint64_t>> ranked(totals.begin(), totals.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::map<std::string, std::uint64_t> channel_breakdown(const std::vector<UsageRecord>& records,
                                                       std::string_view system_id) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& r : records)
    if (r.system_id == system_id) out[std::string(channel_name(r.channel))] += r.sentence_count;
  return out;
}

UsageReport build_report(const std::vector<UsageRecord>& records, std::string_view system_id,
                         Date from, Date to, std::size_t top_k) {
  UsageReport report;
  report.system_id = system_id;
  report.from = from;
  report.to = to;
  report.daily = aggregate_daily(records, system_id, from, to);
  std::vector<UsageRecord> in_range;
  for (const auto& r : records) {
    const auto d = floor<days>(r.timestamp);
    if (r.system_id == system_id && d >= sys_days{from} && d <= sys_days{to})
      in_range.push_back(r);
  }
  for (const auto& r : in_range) report.total += r.sentence_count;
  report.channels = channel_breakdown(in_range, system_id);
  report.clients = top_clients(in_range, system_id, top_k);
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(name) + "' (csv, json)");
}

std::string render_report(const UsageReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "date,system,sentences\n";
    for (const auto& [d, n] : report.daily)
      out += format_date(d) + "," + report.system_id + "," + std::to_string(n) + "\n";
    return out;
  }
  nlohmann::ordered_json doc;
  doc["system"] = report.system_id;
  doc["from"] = format_date(report.from);
  doc["to"] = format_date(report.to);
  doc["total"] = report.total;
  doc["daily"] = nlohmann::ordered_json::array();
  for (const auto& [d, n] : report.daily)
    doc["daily"].push_back({{"date", format_date(d)}, {"sentences", n}});
  doc["channels"] = nlohmann::ordered_json::object();
  for (const auto& [c, n] : report.channels) doc["channels"][c] = n;
  doc["top_clients"] = nlohmann::ordered_json::array();
  for (const auto& [c, n] : report.clients)
    doc["top_clients"].push_back({{"client", c}, {"sentences", n}});
  return doc.dump(2) + "\n";
}

UsageReport parse_report_json(std::string_view json) {
  UsageReport r;
  try {
    const auto doc = nlohmann::json::parse(json);
    r.system_id = doc.at("system").get<std::string>();
    r.from = parse_date(doc.at("from").get<std::string>());
    r.to = parse_date(doc.at("to").get<std::string>());
    r.total = doc.at("total").get<std::uint64_t>();
    for (const auto& d : doc.at("daily"))
      r.daily.emplace_back(parse_date(d.at("date").get<std::string>()),
                           d.at("sentences").get<std::uint64_t>());
    for (const auto& [c, n] : doc.at("channels").items()) r.channels[c] = n.get<std::uint64_t>();
    for (const auto& c : doc.at("top_clients"))
      r.clients.emplace_back(c.at("client").get<std::string>(),
                             c.at("sentences").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed usage report: ") + e.what());
  }
  return r;
}

}  // namespace mtprep

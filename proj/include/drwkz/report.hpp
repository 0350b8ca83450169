#pragma once

// Check reports: one record per check, JSON and plain-text renderings.
// No timestamps, so equal inputs give byte-identical output.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace drwkz::report {

using nlohmann::json;

inline constexpr const char* kTool = "drwkz";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Status { pass, fail, info };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::info: return "info";
  }
  return "info";
}

struct Record {
  std::string id;
  std::string ref;  // the statement the check tests
  Status status = Status::info;
  json payload = json::object();
};

class Report {
 public:
  Report(std::string command, json config) : command_(std::move(command)), config_(std::move(config)) {}

  void add(std::string id, std::string ref, Status status, json payload = json::object()) {
    records_.push_back({std::move(id), std::move(ref), status, std::move(payload)});
  }
  void check(std::string id, std::string ref, bool ok, json payload = json::object()) {
    add(std::move(id), std::move(ref), ok ? Status::pass : Status::fail, std::move(payload));
  }

  const std::vector<Record>& records() const { return records_; }
  const std::string& command() const { return command_; }

  std::size_t count(Status s) const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.status == s;
    return n;
  }
  bool ok() const { return count(Status::fail) == 0; }
  int exit_code() const { return ok() ? 0 : 1; }

  json to_json() const {
    json recs = json::array();
    for (const auto& r : records_)
      recs.push_back({{"id", r.id}, {"ref", r.ref}, {"status", status_name(r.status)}, {"payload", r.payload}});
    return {{"tool", kTool},
            {"version", kVersion},
            {"schema_version", kSchemaVersion},
            {"command", command_},
            {"config", config_},
            {"records", recs},
            {"totals",
             {{"pass", count(Status::pass)}, {"fail", count(Status::fail)}, {"info", count(Status::info)}}}};
  }

  void write_summary(std::ostream& os) const {
    for (const auto& r : records_) {
      os << status_name(r.status) << "  " << r.id;
      if (r.status == Status::fail && r.payload.contains("certificate")) os << "  " << r.payload["certificate"].dump();
      os << "\n";
    }
    os << command_ << ": " << count(Status::pass) << " pass, " << count(Status::fail) << " fail, " << count(Status::info)
       << " info\n";
  }

 private:
  std::string command_;
  json config_;
  std::vector<Record> records_;
};

}  // namespace drwkz::report

#include "pepevolve/runlog.hpp"

#include <chrono>
#include <stdexcept>

namespace pepevolve::runlog {

using nlohmann::json;

RunLog::RunLog(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open run log for writing: " + path);
}

void RunLog::write(const std::string& kind, json payload, std::optional<int> step) {
  json record;
  record["schema_version"] = kSchemaVersion;
  record["kind"] = kind;
  if (step) record["step"] = *step;
  record["ts"] = std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count();
  for (auto& [key, value] : payload.items()) record[key] = std::move(value);
  out_ << record.dump() << '\n';
  out_.flush();
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run log: " + path);
  std::vector<json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(json::parse(line));
  }
  return records;
}

void strip_volatile(json& record) { record.erase("ts"); }

}  // namespace pepevolve::runlog

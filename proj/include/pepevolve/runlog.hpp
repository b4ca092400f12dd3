#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pepevolve::runlog {

inline constexpr int kSchemaVersion = 1;

/// Line-delimited JSON run log: one record per line with schema_version,
/// kind, optional step, wall-clock timestamp, and the payload fields.
class RunLog {
 public:
  explicit RunLog(const std::string& path);

  void write(const std::string& kind, nlohmann::json payload,
             std::optional<int> step = std::nullopt);

 private:
  std::ofstream out_;
};

std::vector<nlohmann::json> read_jsonl(const std::string& path);

/// Drop volatile fields (timestamps) so reruns can be compared byte-wise.
void strip_volatile(nlohmann::json& record);

}  // namespace pepevolve::runlog

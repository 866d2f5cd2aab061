#include "domainscope/manifest.hpp"
#include "domainscope/errors.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace domainscope {

namespace {
using ojson = nlohmann::ordered_json;
}

std::string manifest_to_json(const RunManifest& m) {
  ojson j;
  j["schema"] = "v1";
  j["tool_version"] = m.tool_version;
  j["subcommand"] = m.subcommand;
  j["flags"] = m.flags;
  j["profile_id"] = m.profile_id;
  j["input_hashes"] = m.input_hashes;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["exit_status"] = m.exit_status;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const ojson j = ojson::parse(text);
  if (j.value("schema", "") != "v1") {
    throw std::runtime_error("manifest: unsupported schema (want \"v1\")");
  }
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.subcommand = j.at("subcommand").get<std::string>();
  m.flags = j.at("flags").get<std::map<std::string, std::string>>();
  m.profile_id = j.at("profile_id").get<std::string>();
  m.input_hashes = j.at("input_hashes").get<std::map<std::string, std::string>>();
  m.started_at = j.at("started_at").get<std::string>();
  m.finished_at = j.at("finished_at").get<std::string>();
  m.exit_status = j.at("exit_status").get<int>();
  return m;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp + ": cannot open for writing");
    out << manifest_to_json(m);
    out.flush();
    if (!out) throw IoError(tmp + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace domainscope

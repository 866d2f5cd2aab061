#ifndef DOMAINSCOPE_MANIFEST_HPP
#define DOMAINSCOPE_MANIFEST_HPP

#include <map>
#include <string>

namespace domainscope {

/// Provenance record a run leaves next to its outputs: what ran, with
/// which resolved flags, over which input bytes.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::map<std::string, std::string> flags;         // resolved flag -> value
  std::string profile_id;                           // empty when not applicable
  std::map<std::string, std::string> input_hashes;  // path -> "fnv1a64:<hex>"
  std::string started_at;                           // ISO 8601 UTC
  std::string finished_at;
  int exit_status = 0;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

/// Write-to-temp-then-rename so readers never observe a partial manifest.
void write_manifest(const RunManifest& m, const std::string& path);

std::string iso8601_utc_now();

}  // namespace domainscope

#endif  // DOMAINSCOPE_MANIFEST_HPP

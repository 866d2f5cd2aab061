#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "domainscope/errors.hpp"
#include "domainscope/hash.hpp"
#include "domainscope/manifest.hpp"
#include "support/fixtures.hpp"

using namespace domainscope;
using namespace testsupport;

TEST_SUITE_BEGIN("manifest");

TEST_CASE("fnv1a64 matches the published reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
}

TEST_CASE("hash_file prefixes the algorithm and hashes raw bytes") {
  TempDir dir("hash");
  const std::string path = dir.file("blob.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "foobar";
  }
  CHECK(hash_file(path) == "fnv1a64:85944171f73967e8");
  CHECK_THROWS_AS(hash_file(dir.file("missing.bin")), IoError);
}

TEST_CASE("manifest json round-trips every field") {
  RunManifest m;
  m.tool_version = "0.1.0";
  m.subcommand = "label";
  m.flags = {{"--workers", "4"}, {"--out", "labels.jsonl"}};
  m.profile_id = "fnv1a64:deadbeef00000000";
  m.input_hashes = {{"annotations.json", "fnv1a64:85944171f73967e8"}};
  m.started_at = "2024-05-01T10:00:00Z";
  m.finished_at = "2024-05-01T10:00:05Z";
  m.exit_status = 3;

  RunManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.tool_version == m.tool_version);
  CHECK(back.subcommand == m.subcommand);
  CHECK(back.flags == m.flags);
  CHECK(back.profile_id == m.profile_id);
  CHECK(back.input_hashes == m.input_hashes);
  CHECK(back.started_at == m.started_at);
  CHECK(back.finished_at == m.finished_at);
  CHECK(back.exit_status == 3);
}

TEST_CASE("write_manifest lands atomically with no temp residue") {
  TempDir dir("manifest");
  RunManifest m;
  m.tool_version = "0.1.0";
  m.subcommand = "evaluate";
  m.started_at = iso8601_utc_now();
  m.finished_at = m.started_at;
  const std::string path = dir.file("run_manifest.json");
  write_manifest(m, path);

  REQUIRE(std::filesystem::exists(path));
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RunManifest back = manifest_from_json(text);
  CHECK(back.subcommand == "evaluate");

  // Only the final file remains in the directory.
  std::size_t entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.str())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("iso8601_utc_now emits a Z-suffixed timestamp") {
  const std::string ts = iso8601_utc_now();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[7] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[13] == ':');
  CHECK(ts[16] == ':');
  CHECK(ts.back() == 'Z');
}

TEST_SUITE_END();

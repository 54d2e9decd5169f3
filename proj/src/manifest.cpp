#include "meritorder/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "meritorder/common.hpp"
#include "meritorder/csv.hpp"
#include "meritorder/timeutil.hpp"

namespace meritorder {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 unavailable");
    }
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw std::runtime_error("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw std::runtime_error("SHA-256 final failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
      out.push_back(kHex[md[i] >> 4]);
      out.push_back(kHex[md[i] & 0xF]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string manifest_created_time() {
  using namespace std::chrono;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long secs = std::strtoll(epoch, &end, 10);
    if (*end == '\0') return format_iso8601(Timestamp{seconds{secs}});
  }
  return format_iso8601(floor<seconds>(system_clock::now()));
}

std::string manifest_json(const RunManifest& m) {
  using nlohmann::ordered_json;
  ordered_json inputs = ordered_json::object();
  for (const auto& [path, digest] : m.inputs) inputs[path] = digest;
  ordered_json outputs = ordered_json::object();
  for (const auto& [path, digest] : m.outputs) outputs[path] = digest;
  ordered_json j;
  j["command"] = m.command;
  j["version"] = MERITORDER_VERSION;
  j["config_hash"] = sha256_hex(m.config);
  j["config"] = ordered_json::parse(m.config.empty() ? std::string("{}") : m.config);
  j["input_digests"] = inputs;
  j["output_digests"] = outputs;
  j["seed"] = m.seed ? ordered_json(*m.seed) : ordered_json();
  j["rng_algorithm"] = m.rng_algorithm.empty() ? ordered_json() : ordered_json(m.rng_algorithm);
  j["timestamps"] = {{"created", manifest_created_time()},
                     {"data_start", m.data_start},
                     {"data_end", m.data_end}};
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& dir, RunManifest manifest,
                    const std::vector<std::string>& output_files) {
  for (const auto& name : output_files) {
    manifest.outputs.emplace_back(name, sha256_file(dir / name));
  }
  csv::write_text(dir / kManifestFile, manifest_json(manifest));
}

}  // namespace meritorder

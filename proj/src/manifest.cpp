#include "triage/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

#include "triage/common.hpp"

#ifndef TRIAGE_VERSION
#define TRIAGE_VERSION "0.0.0"
#endif

namespace triage {
namespace {

using Ctx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

std::string hex(const unsigned char* p, unsigned n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned i = 0; i < n; ++i) {
    out += digits[p[i] >> 4];
    out += digits[p[i] & 0xf];
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  return hex(md, n);
}

std::string sha256_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read " + file.string());
  Ctx ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &n);
  return hex(md, n);
}

std::string toolkit_version() { return TRIAGE_VERSION; }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  auto ds = nlohmann::json::array();
  for (const auto& d : datasets) ds.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
  j["datasets"] = ds;
  j["seeds"] = seeds;
  j["master_seed"] = master_seed;
  j["version"] = version;
  j["duration_seconds"] = duration_seconds;
  auto outs = nlohmann::json::object();
  for (const auto& [name, digest] : outputs) outs[name] = digest;
  j["outputs"] = outs;
  return j;
}

}  // namespace triage

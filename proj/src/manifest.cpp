#include "micromaser/manifest.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "micromaser/csv_io.hpp"

namespace micromaser {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string RunManifest::render() const {
  std::ostringstream out;
  out << "# micromaser run manifest; replay with: micromaser " << command << " --config <this file>\n";
  out << "schema_version = " << csv::kSchemaVersion << '\n';
  out << "code_version = " << MICROMASER_VERSION << '\n';
  out << "command = " << command << '\n';
  if (!schedule.empty()) out << "# schedule: " << schedule << '\n';
  out << config.to_text();
  for (const auto& w : warnings) out << "# warning: " << w << '\n';
  for (const auto& [name, digest] : digests) out << "digest." << name << " = sha256:" << digest << '\n';
  return out.str();
}

}  // namespace micromaser

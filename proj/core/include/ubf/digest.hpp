#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ubf {

// FNV-1a, 64-bit. Used for content digests in manifests and provenance;
// stable across platforms and documented so other tooling can recompute it.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Digest of a file's raw bytes. Throws IoError when unreadable.
std::string file_digest_hex(const std::string& path);

}  // namespace ubf

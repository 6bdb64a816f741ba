#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace snowforge {

/// Incremental 64-bit FNV-1a.
class Fnv1a64 {
public:
    void update(std::span<const std::uint8_t> bytes) noexcept {
        for (std::uint8_t b : bytes) {
            hash_ ^= b;
            hash_ *= 0x100000001B3ull;
        }
    }
    std::uint64_t value() const noexcept { return hash_; }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

/// 16 lowercase hex digits.
std::string to_hex(std::uint64_t v);

/// FNV-1a 64 over the raw bytes of a file. Throws IoError.
std::uint64_t file_checksum(const std::filesystem::path& path);

/// Digest of a directory tree: sorted relative paths and file contents.
std::uint64_t tree_checksum(const std::filesystem::path& root);

}  // namespace snowforge

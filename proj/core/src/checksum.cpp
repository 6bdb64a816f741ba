#include "snowforge/checksum.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <vector>

#include "snowforge/error.hpp"

namespace fs = std::filesystem;

namespace snowforge {

std::string to_hex(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
        v >>= 4;
    }
    return out;
}

namespace {

void hash_file(const fs::path& path, Fnv1a64& h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        const auto got = static_cast<std::size_t>(in.gcount());
        h.update({reinterpret_cast<const std::uint8_t*>(buf.data()), got});
    }
}

}  // namespace

std::uint64_t file_checksum(const fs::path& path) {
    Fnv1a64 h;
    hash_file(path, h);
    return h.value();
}

std::uint64_t tree_checksum(const fs::path& root) {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), root).generic_string());
    }
    std::sort(files.begin(), files.end());
    Fnv1a64 h;
    for (const auto& rel : files) {
        h.update({reinterpret_cast<const std::uint8_t*>(rel.data()), rel.size() + 1});
        hash_file(root / rel, h);
    }
    return h.value();
}

}  // namespace snowforge

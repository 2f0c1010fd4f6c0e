#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace llesim {

/// Minimal zip container, entries stored uncompressed with zeroed
/// timestamps so that identical content always produces identical bytes.
/// Only what the results bundles need: no compression, no zip64, no
/// encryption. Readers reject anything but stored entries.
class ZipWriter {
public:
    /// Entry names must be unique and use forward slashes.
    void add(const std::string& name, const std::string& bytes);
    void add(const std::string& name, const void* data, std::size_t size);

    /// Serialize and atomically replace `path` (temp file + rename).
    void write(const std::string& path) const;

    std::string to_bytes() const;

private:
    struct Entry {
        std::string name;
        std::string bytes;
        std::uint32_t crc = 0;
    };
    std::vector<Entry> entries_;
};

/// Random-access reader over the same subset of the format.
class ZipReader {
public:
    explicit ZipReader(const std::string& path);

    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;

    /// Extract one entry, verifying size and CRC. Throws CorruptBundle.
    std::string read(const std::string& name) const;

private:
    struct Entry {
        std::uint64_t local_offset = 0;
        std::uint32_t size = 0;
        std::uint32_t crc = 0;
    };
    std::string blob_;
    std::map<std::string, Entry> entries_;
};

} // namespace llesim

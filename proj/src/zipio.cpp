#include "llesim/zipio.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "llesim/errors.hpp"

namespace llesim {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kVersion = 20;
// 1980-01-01, the DOS epoch; fixed so rewrites are byte-identical.
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

void put16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v & 0xffff));
    put16(out, static_cast<std::uint16_t>((v >> 16) & 0xffff));
}

std::uint16_t get16(const std::string& s, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off]) |
                                      (static_cast<unsigned char>(s[off + 1]) << 8));
}

std::uint32_t get32(const std::string& s, std::size_t off) {
    return static_cast<std::uint32_t>(get16(s, off)) |
           (static_cast<std::uint32_t>(get16(s, off + 2)) << 16);
}

std::uint32_t crc_of(const std::string& bytes) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

} // namespace

void ZipWriter::add(const std::string& name, const std::string& bytes) {
    for (const Entry& e : entries_)
        if (e.name == name) throw IoFailure("duplicate zip entry: " + name);
    entries_.push_back({name, bytes, crc_of(bytes)});
}

void ZipWriter::add(const std::string& name, const void* data, std::size_t size) {
    add(name, std::string(static_cast<const char*>(data), size));
}

std::string ZipWriter::to_bytes() const {
    std::string out;
    std::vector<std::uint32_t> offsets;
    offsets.reserve(entries_.size());

    for (const Entry& e : entries_) {
        offsets.push_back(static_cast<std::uint32_t>(out.size()));
        put32(out, kLocalSig);
        put16(out, kVersion);
        put16(out, 0); // flags
        put16(out, 0); // method: stored
        put16(out, 0); // mod time
        put16(out, kDosDate);
        put32(out, e.crc);
        put32(out, static_cast<std::uint32_t>(e.bytes.size()));
        put32(out, static_cast<std::uint32_t>(e.bytes.size()));
        put16(out, static_cast<std::uint16_t>(e.name.size()));
        put16(out, 0); // extra length
        out += e.name;
        out += e.bytes;
    }

    const std::uint32_t central_start = static_cast<std::uint32_t>(out.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        put32(out, kCentralSig);
        put16(out, kVersion);
        put16(out, kVersion);
        put16(out, 0);
        put16(out, 0);
        put16(out, 0);
        put16(out, kDosDate);
        put32(out, e.crc);
        put32(out, static_cast<std::uint32_t>(e.bytes.size()));
        put32(out, static_cast<std::uint32_t>(e.bytes.size()));
        put16(out, static_cast<std::uint16_t>(e.name.size()));
        put16(out, 0);
        put16(out, 0);
        put16(out, 0); // disk number
        put16(out, 0); // internal attrs
        put32(out, 0); // external attrs
        put32(out, offsets[i]);
        out += e.name;
    }
    const std::uint32_t central_size = static_cast<std::uint32_t>(out.size()) - central_start;

    put32(out, kEndSig);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(entries_.size()));
    put16(out, static_cast<std::uint16_t>(entries_.size()));
    put32(out, central_size);
    put32(out, central_start);
    put16(out, 0); // comment length
    return out;
}

void ZipWriter::write(const std::string& path) const {
    const std::string bytes = to_bytes();
    const std::string tmp = path + ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw IoFailure("cannot open for writing: " + tmp);
        file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!file) throw IoFailure("short write: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoFailure("cannot move results into place at " + path);
    }
}

ZipReader::ZipReader(const std::string& path) {
    {
        std::ifstream file(path, std::ios::binary);
        if (!file) throw IoFailure("cannot open bundle: " + path);
        std::ostringstream buffer;
        buffer << file.rdbuf();
        blob_ = buffer.str();
    }
    if (blob_.size() < 22) throw CorruptBundle("bundle too small to be a zip container");

    // End-of-central-directory: scan backwards over a possible comment.
    std::size_t eocd = std::string::npos;
    const std::size_t scan_limit = blob_.size() >= 22 + 0xffff ? blob_.size() - 22 - 0xffff : 0;
    for (std::size_t pos = blob_.size() - 22; ; --pos) {
        if (get32(blob_, pos) == kEndSig) {
            eocd = pos;
            break;
        }
        if (pos == scan_limit) break;
    }
    if (eocd == std::string::npos) throw CorruptBundle("zip end-of-central-directory not found");

    const std::uint16_t count = get16(blob_, eocd + 10);
    const std::uint32_t central_size = get32(blob_, eocd + 12);
    const std::uint32_t central_start = get32(blob_, eocd + 16);
    if (central_start + central_size > blob_.size()) throw CorruptBundle("central directory out of range");

    std::size_t pos = central_start;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (pos + 46 > blob_.size() || get32(blob_, pos) != kCentralSig)
            throw CorruptBundle("bad central directory entry");
        const std::uint16_t method = get16(blob_, pos + 10);
        Entry entry;
        entry.crc = get32(blob_, pos + 16);
        const std::uint32_t csize = get32(blob_, pos + 20);
        entry.size = get32(blob_, pos + 24);
        const std::uint16_t name_len = get16(blob_, pos + 28);
        const std::uint16_t extra_len = get16(blob_, pos + 30);
        const std::uint16_t comment_len = get16(blob_, pos + 32);
        entry.local_offset = get32(blob_, pos + 42);
        if (method != 0 || csize != entry.size)
            throw CorruptBundle("unsupported zip entry encoding (only stored entries are readable)");
        const std::string name = blob_.substr(pos + 46, name_len);
        entries_[name] = entry;
        pos += 46 + name_len + extra_len + comment_len;
    }
}

bool ZipReader::contains(const std::string& name) const { return entries_.contains(name); }

std::vector<std::string> ZipReader::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, _] : entries_) out.push_back(name);
    return out;
}

std::string ZipReader::read(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw CorruptBundle("missing bundle entry: " + name);
    const Entry& entry = it->second;

    const std::size_t pos = entry.local_offset;
    if (pos + 30 > blob_.size() || get32(blob_, pos) != kLocalSig)
        throw CorruptBundle("bad local header for entry: " + name);
    const std::uint16_t name_len = get16(blob_, pos + 26);
    const std::uint16_t extra_len = get16(blob_, pos + 28);
    const std::size_t data_start = pos + 30 + name_len + extra_len;
    if (data_start + entry.size > blob_.size())
        throw CorruptBundle("truncated data for entry: " + name);

    std::string bytes = blob_.substr(data_start, entry.size);
    if (crc_of(bytes) != entry.crc) throw CorruptBundle("checksum mismatch for entry: " + name);
    return bytes;
}

} // namespace llesim

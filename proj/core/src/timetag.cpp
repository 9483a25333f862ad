#include "qfcsim/core/timetag.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "qfcsim/core/errors.hpp"

namespace qfcsim {

namespace {

constexpr std::array<std::byte, 4> kMagic = {std::byte{'Q'}, std::byte{'T'}, std::byte{'T'},
                                             std::byte{'1'}};

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::byte>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(std::to_integer<std::uint8_t>(bytes[offset + i])) << (8 * i);
  }
  return value;
}

}  // namespace

bool is_valid_channel(std::uint32_t raw) noexcept { return raw <= 2; }

void sort_tags(TagStream& tags) { std::sort(tags.begin(), tags.end(), tag_less); }

bool is_time_sorted(std::span<const TimeTagRecord> tags) noexcept {
  return std::is_sorted(tags.begin(), tags.end(),
                        [](const auto& a, const auto& b) { return a.time_ps < b.time_ps; });
}

std::vector<std::byte> write_timetags(std::span<const TimeTagRecord> tags) {
  std::vector<std::byte> out;
  out.reserve(kQttHeaderBytes + kQttRecordBytes * tags.size());
  for (const std::byte b : kMagic) {
    out.push_back(b);
  }
  put_le<std::uint32_t>(out, kQttVersion);
  put_le<std::uint64_t>(out, tags.size());
  std::uint64_t previous = 0;
  for (const auto& tag : tags) {
    if (tag.time_ps < previous) {
      throw FormatError("refusing to write time regression", out.size());
    }
    previous = tag.time_ps;
    put_le<std::uint64_t>(out, tag.time_ps);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tag.channel));
    put_le<std::uint32_t>(out, 0);
  }
  return out;
}

void write_timetags(std::ostream& out, std::span<const TimeTagRecord> tags) {
  const auto bytes = write_timetags(tags);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_timetags_file(const std::filesystem::path& path, std::span<const TimeTagRecord> tags) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  write_timetags(out, tags);
}

TagStream read_timetags(std::span<const std::byte> bytes) {
  if (bytes.size() < kQttHeaderBytes) {
    throw FormatError("truncated header", bytes.size());
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("bad magic, expected \"QTT1\"", 0);
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kQttVersion) {
    throw FormatError("unsupported version " + std::to_string(version), 4);
  }
  const auto count = get_le<std::uint64_t>(bytes, 8);
  const std::uint64_t payload = bytes.size() - kQttHeaderBytes;
  if (count > payload / kQttRecordBytes) {
    const std::uint64_t complete = payload / kQttRecordBytes;
    throw FormatError("truncated record " + std::to_string(complete) + " of " + std::to_string(count),
                      kQttHeaderBytes + complete * kQttRecordBytes);
  }
  if (payload != count * kQttRecordBytes) {
    throw FormatError("trailing bytes after last record", kQttHeaderBytes + count * kQttRecordBytes);
  }

  TagStream tags;
  tags.reserve(count);
  std::uint64_t previous = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t at = kQttHeaderBytes + i * kQttRecordBytes;
    const auto time = get_le<std::uint64_t>(bytes, at);
    const auto channel = get_le<std::uint32_t>(bytes, at + 8);
    const auto reserved = get_le<std::uint32_t>(bytes, at + 12);
    if (time < previous) {
      throw FormatError("time regression in record " + std::to_string(i), at);
    }
    if (!is_valid_channel(channel)) {
      throw FormatError("invalid channel " + std::to_string(channel), at + 8);
    }
    if (reserved != 0) {
      throw FormatError("nonzero reserved field", at + 12);
    }
    previous = time;
    tags.push_back({static_cast<Channel>(channel), time});
  }
  return tags;
}

TagStream read_timetags(std::istream& in) {
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_timetags(std::as_bytes(std::span<const char>(raw)));
}

TagStream read_timetags_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return read_timetags(in);
}

}  // namespace qfcsim

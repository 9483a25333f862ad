#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace qfcsim {

enum class Channel : std::uint32_t {
  kSignal = 0,   // signal detector
  kSecond = 1,   // second detector of an HBT pair
  kSync = 2,     // excitation-pulse marker
};

// One detection event. Times are integer picoseconds since run start.
struct TimeTagRecord {
  Channel channel = Channel::kSignal;
  std::uint64_t time_ps = 0;

  friend bool operator==(const TimeTagRecord&, const TimeTagRecord&) = default;
};

using TagStream = std::vector<TimeTagRecord>;

bool is_valid_channel(std::uint32_t raw) noexcept;

// Time-then-channel ordering used for every sorted stream in the library.
inline bool tag_less(const TimeTagRecord& a, const TimeTagRecord& b) noexcept {
  return a.time_ps != b.time_ps ? a.time_ps < b.time_ps : a.channel < b.channel;
}

void sort_tags(TagStream& tags);
bool is_time_sorted(std::span<const TimeTagRecord> tags) noexcept;

// QTT1 layout, all fields little-endian:
//   header  "QTT1" | version u32 (=1) | record_count u64         (16 bytes)
//   record  time_ps u64 | channel u32 | reserved u32 (=0)        (16 bytes)
inline constexpr std::size_t kQttHeaderBytes = 16;
inline constexpr std::size_t kQttRecordBytes = 16;
inline constexpr std::uint32_t kQttVersion = 1;

std::vector<std::byte> write_timetags(std::span<const TimeTagRecord> tags);
void write_timetags(std::ostream& out, std::span<const TimeTagRecord> tags);
void write_timetags_file(const std::filesystem::path& path, std::span<const TimeTagRecord> tags);

// Throws FormatError (with byte offset) on bad magic or version, truncation,
// trailing bytes, unknown channel, nonzero reserved field or time regression.
TagStream read_timetags(std::span<const std::byte> bytes);
TagStream read_timetags(std::istream& in);
TagStream read_timetags_file(const std::filesystem::path& path);

}  // namespace qfcsim

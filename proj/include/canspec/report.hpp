#pragma once

// Deterministic report emission: CSV documents with a header row and a
// config-hash footer, and the 64-bit FNV-1a hash that stamps them.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace canspec::report {

// FNV-1a over the byte sequence; the offset-basis/prime pair of the
// 64-bit variant.
std::uint64_t fnv1a64(std::string_view bytes);

// "0x" + 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

// CSV builder: comma separator, LF line endings, header row first, cells
// quoted (with doubled quotes) only when they contain a comma, quote, or
// newline.  finish() appends a comment footer naming the config hash.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  // Cell count must match the header.
  void row(const std::vector<std::string>& cells);

  std::string finish(std::uint64_t config_hash) const;

 private:
  std::size_t width_;
  std::string body_;
};

// Replaces the file at `path` with `text`, creating parent directories as
// needed.  Throws config_error when the path cannot be written.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace canspec::report

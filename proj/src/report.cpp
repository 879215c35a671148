#include "canspec/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "canspec/errors.hpp"

namespace canspec::report {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[2 + 16 + 1];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

bool needs_quotes(std::string_view cell) {
  return cell.find_first_of(",\"\n") != std::string_view::npos;
}

void append_cell(std::string& out, std::string_view cell) {
  if (!needs_quotes(cell)) {
    out += cell;
    return;
  }
  out += '"';
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

CsvWriter::CsvWriter(const std::vector<std::string>& header)
    : width_(header.size()) {
  if (header.empty()) throw config_error("CSV report needs a header row");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    append_cell(body_, header[i]);
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw config_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    append_cell(body_, cells[i]);
  }
  body_ += '\n';
}

std::string CsvWriter::finish(std::uint64_t config_hash) const {
  return body_ + "# config_hash=" + hash_hex(config_hash) + "\n";
}

void write_text_file(const std::string& path, std::string_view text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
      throw config_error("cannot create report directory " +
                         p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("cannot open report file " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw config_error("failed writing report file " + path);
}

}  // namespace canspec::report

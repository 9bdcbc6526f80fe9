#include "blockflow/util/csv.hpp"

#include <utility>

namespace blockflow::util {

std::string formatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(CsvWriter&& other) noexcept
    : file_(std::exchange(other.file_, nullptr)),
      rows_(std::exchange(other.rows_, 0)) {}

CsvWriter& CsvWriter::operator=(CsvWriter&& other) noexcept {
  if (this != &other) {
    close();
    file_ = std::exchange(other.file_, nullptr);
    rows_ = std::exchange(other.rows_, 0);
  }
  return *this;
}

CsvWriter::~CsvWriter() { close(); }

bool CsvWriter::open(const std::filesystem::path& path, int width) {
  close();
  file_ = std::fopen(path.string().c_str(), "wb");
  if (file_ == nullptr) return false;
  std::fputs("time", file_);
  for (int i = 0; i < width; ++i) std::fprintf(file_, ",v%d", i);
  std::fputc('\n', file_);
  rows_ = 0;
  return true;
}

void CsvWriter::writeRow(double time, std::span<const double> values) {
  if (file_ == nullptr) return;
  std::fputs(formatDouble(time).c_str(), file_);
  for (double v : values) {
    std::fputc(',', file_);
    std::fputs(formatDouble(v).c_str(), file_);
  }
  std::fputc('\n', file_);
  ++rows_;
}

bool CsvWriter::close() {
  if (file_ == nullptr) return true;
  const bool flushed = std::fclose(file_) == 0;
  file_ = nullptr;
  return flushed;
}

}  // namespace blockflow::util

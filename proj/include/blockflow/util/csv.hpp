#pragma once

#include <cstdio>
#include <filesystem>
#include <span>
#include <string>

namespace blockflow::util {

/// Formats a double with 17 significant digits so that parsing the text
/// reproduces the exact bit pattern.
std::string formatDouble(double value);

/// Step-indexed CSV writer shared by the engine log service and file sinks.
/// Layout: header `time,v0,v1,...`, then one row per step. Rows are written
/// with formatDouble so consecutive runs produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  CsvWriter(CsvWriter&& other) noexcept;
  CsvWriter& operator=(CsvWriter&& other) noexcept;
  ~CsvWriter();

  /// Opens the file and writes the header for `width` value columns.
  /// Returns false when the file cannot be created.
  bool open(const std::filesystem::path& path, int width);

  void writeRow(double time, std::span<const double> values);

  /// Flushes and closes; safe to call more than once. Returns false when
  /// the final flush fails (disk full, revoked descriptor).
  bool close();

  bool isOpen() const { return file_ != nullptr; }
  long rowsWritten() const { return rows_; }

 private:
  std::FILE* file_ = nullptr;
  long rows_ = 0;
};

}  // namespace blockflow::util

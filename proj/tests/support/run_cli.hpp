#pragma once

// Runs child processes (the CLI, generated bundles) and captures their
// output, for tests that exercise the shipped binaries end to end.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace testsupport {

struct CommandResult {
  int exitCode = -1;
  std::string out;
  std::string err;
};

inline std::string readAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Runs `command` through the shell with stdout/stderr captured to files in
/// `workDir` (which must exist).
inline CommandResult runCommand(const std::string& command,
                                const std::filesystem::path& workDir) {
  const auto outPath = workDir / "cmd.out";
  const auto errPath = workDir / "cmd.err";
  const std::string full = command + " > '" + outPath.string() + "' 2> '" +
                           errPath.string() + "'";
  CommandResult result;
  const int status = std::system(full.c_str());
  if (status == -1) {
    result.exitCode = -1;
  } else if (WIFEXITED(status)) {
    result.exitCode = WEXITSTATUS(status);
  } else {
    result.exitCode = 128;  // terminated by signal
  }
  result.out = readAll(outPath);
  result.err = readAll(errPath);
  return result;
}

/// A fresh directory under the system temp root, unique per call.
inline std::filesystem::path makeTempDir(const std::string& tag) {
  static int counter = 0;
  const auto base = std::filesystem::temp_directory_path() /
                    ("blockflow_" + tag + "_" + std::to_string(::getpid()) +
                     "_" + std::to_string(counter++));
  std::filesystem::create_directories(base);
  return base;
}

}  // namespace testsupport

#pragma once

// Spawning the jetgeom executable from tests. JETGEOM_CLI_PATH and
// JETGEOM_MODELS_DIR are injected by CMake.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline std::string cli_path() { return JETGEOM_CLI_PATH; }
inline std::string model_path(const std::string& file) { return std::string(JETGEOM_MODELS_DIR) + "/" + file; }

/// Scratch directory unique to the calling test binary.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("jetgeom-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

/// Runs `jetgeom <args>` through the shell with stdout and stderr sent to
/// files, and returns the exit status (or -1 if the process did not exit).
inline int run_cli(const std::string& args, const std::filesystem::path& stdout_file = "/dev/null",
                   const std::filesystem::path& stderr_file = "/dev/null") {
  const std::string cmd = "'" + cli_path() + "' " + args + " >'" + stdout_file.string() + "' 2>'" + stderr_file.string() + "'";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testing

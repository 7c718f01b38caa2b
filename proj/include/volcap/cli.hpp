#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace volcap::cli {

struct RunOptions {
  std::string spec_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool verbose = false;
};

/// Runs every analysis requested by the problem spec and writes one artifact
/// per analysis plus summary.json into `out_dir`.
/// Returns 0 when all analyses completed and every cross-check passed,
/// 2 when a cross-check failed, 1 on errors.
int run(const RunOptions& options, std::ostream& log);

}  // namespace volcap::cli

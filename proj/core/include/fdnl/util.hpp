#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdnl {

// Error taxonomy shared by the library and the CLI driver.
// config -> exit 1, runtime -> exit 2, io -> exit 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SHA-256 of a byte buffer, lowercase hex digest.
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::filesystem::path& p);

// Shortest-exact decimal formatting used for every numeric value that
// lands in a CSV or JSON report (17 significant digits round-trips
// IEEE-754 binary64).
std::string fmt17(double v);

// Writes to "<path>.tmp.<pid>" then renames, so readers never observe a
// partially written file and a failed run leaves no output behind.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

// Deterministic parallel map: runs fn(i) for i in [0, n) on `threads`
// workers. Results must be written by fn into per-index slots owned by
// the caller; the call returns after all workers join, so any reduction
// done afterwards in index order is independent of the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fdnl

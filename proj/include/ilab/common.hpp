#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilab {

// Input/content problems (missing files, malformed rows, ...). The CLI maps
// these to exit code 2; usage mistakes map to 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Names one independent RNG sequence. Derived deterministically from a master
// seed plus a stream id, so parallel and serial generation agree bit for bit.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Stream-id namespace tags; index stays below 2^56.
constexpr std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t index) {
  return (purpose << 56) | (index & 0x00FF'FFFF'FFFF'FFFFull);
}
inline constexpr std::uint64_t kStreamPaths = 0;
inline constexpr std::uint64_t kStreamSignalDraws = 1;

// Neumaier compensated sum in index order; deterministic regardless of
// threading because callers accumulate per-index values first.
double compensated_sum(std::span<const double> xs);

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, n-1 convention
};
MeanVar mean_and_variance(std::span<const double> xs);

double clamp01(double x);

// Fixed-width scientific formatting (17 significant digits): lossless and
// stable across platforms, used by every CSV writer.
std::string format_full(double v);

}  // namespace ilab

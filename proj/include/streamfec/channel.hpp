#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "streamfec/decoder.hpp"
#include "streamfec/errors.hpp"

namespace streamfec {

/// Counter-based 64-bit generator (SplitMix64 output function). Stream member
/// i for a seed is mix(seed + (i+1) * 0x9E3779B97F4A7C15) with the standard
/// xor-shift-multiply constants below, so any language reproduces the exact
/// sequence from (seed, counter) alone.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter)
{
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Top 53 bits as a double in [0, 1); exact in IEEE-754.
inline double unit_interval(std::uint64_t x)
{
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Two-state Markov erasure channel: good-state erasure probability eps0,
/// bad-state erasure probability eps1, good->bad transition probability alpha,
/// bad->good transition probability beta.
struct GEParams
{
  double alpha = 0.0;
  double beta = 0.0;
  double eps0 = 0.0;
  double eps1 = 1.0;

  void validate() const
  {
    for (double v : {alpha, beta, eps0, eps1}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParameterError("GE channel probabilities must lie in [0, 1]");
      }
    }
  }
};

/// Steps the chain one packet at a time. The channel starts in the good state;
/// each step first draws the erasure decision for the current state (counter
/// 2t), then the state transition (counter 2t+1).
class GilbertElliott
{
public:
  GilbertElliott(const GEParams& params, std::uint64_t seed)
    : params_{params}, seed_{seed}
  {
    params_.validate();
  }

  bool in_bad_state() const noexcept { return bad_; }

  bool step()
  {
    const double erase_draw = unit_interval(mix64(seed_, 2 * t_));
    const double trans_draw = unit_interval(mix64(seed_, 2 * t_ + 1));
    const bool erased = erase_draw < (bad_ ? params_.eps1 : params_.eps0);
    if (bad_ ? (trans_draw < params_.beta) : (trans_draw < params_.alpha)) bad_ = !bad_;
    ++t_;
    return erased;
  }

private:
  GEParams params_;
  std::uint64_t seed_;
  std::uint64_t t_ = 0;
  bool bad_ = false;
};

inline ErasurePattern ge_generate(const GEParams& params, std::size_t len, std::uint64_t seed)
{
  if (len < 1) throw UsageError("ge_generate: len must be at least 1");
  GilbertElliott chain(params, seed);
  ErasurePattern out(len, 0);
  for (std::size_t t = 0; t < len; ++t) out[t] = chain.step() ? 1 : 0;
  return out;
}

/// All n-B'+1 patterns with one burst of exactly B' consecutive erasures.
inline std::vector<ErasurePattern> enumerate_bursts(int burst_len, int n)
{
  if (burst_len < 1 || burst_len > n) throw UsageError("enumerate_bursts: invalid burst length");
  std::vector<ErasurePattern> out;
  for (int s = 0; s + burst_len <= n; ++s) {
    ErasurePattern mask(n, 0);
    for (int j = 0; j < burst_len; ++j) mask[s + j] = 1;
    out.push_back(std::move(mask));
  }
  return out;
}

struct BurstPlusArbitraryOptions
{
  int burst_min = 1;      // least 1-based start position for the burst
  int burst_max = 0;      // greatest 1-based start position; 0 means n-B'+1
  int arbitrary_min = 1;  // least 1-based position for the extra erasures
};

/// Patterns made of one maximal run of exactly burst_len erasures plus `extra`
/// further erasures that do not touch (extend) that run, deduplicated.
inline std::vector<ErasurePattern> enumerate_burst_plus_arbitrary(
    int burst_len, int extra, int n, const BurstPlusArbitraryOptions& opt = {})
{
  if (burst_len < 1 || burst_len > n || extra < 0 || burst_len + extra > n) {
    throw UsageError("enumerate_burst_plus_arbitrary: invalid family");
  }
  const int lo = std::max(opt.burst_min, 1);
  const int hi = opt.burst_max > 0 ? opt.burst_max : n - burst_len + 1;
  std::set<ErasurePattern> seen;
  for (int s = lo; s <= std::min(hi, n - burst_len + 1); ++s) {
    std::vector<int> allowed;  // 0-based candidate slots for the extras
    for (int j = 0; j < n; ++j) {
      const int pos = j + 1;
      if (pos >= s - 1 && pos <= s + burst_len) continue;  // burst or adjacent
      if (pos < opt.arbitrary_min) continue;
      allowed.push_back(j);
    }
    if (static_cast<int>(allowed.size()) < extra) continue;
    std::vector<int> pick(extra);
    for (int t = 0; t < extra; ++t) pick[t] = t;
    while (true) {
      ErasurePattern mask(n, 0);
      for (int j = 0; j < burst_len; ++j) mask[s - 1 + j] = 1;
      for (int t = 0; t < extra; ++t) mask[allowed[pick[t]]] = 1;
      seen.insert(std::move(mask));
      // next combination
      int t = extra - 1;
      while (t >= 0 && pick[t] == static_cast<int>(allowed.size()) - extra + t) --t;
      if (t < 0) break;
      ++pick[t];
      for (int u = t + 1; u < extra; ++u) pick[u] = pick[u - 1] + 1;
    }
  }
  return {seen.begin(), seen.end()};
}

/// Channel family C(N, B, W): each length-W window holds either one burst of
/// at most B erasures or at most N arbitrary erasures.
struct SlidingWindowSpec
{
  int N = 0;
  int B = 0;
  int W = 1;

  static SlidingWindowSpec for_delay(int N, int B, int T) { return {N, B, T + 1}; }

  void validate() const
  {
    if (N < 0 || N > B || B > W || W < 1) {
      throw ParameterError("sliding window spec requires 0 <= N <= B <= W");
    }
  }
};

inline bool sliding_window_admissible(const ErasurePattern& mask, const SlidingWindowSpec& spec)
{
  spec.validate();
  const int n = static_cast<int>(mask.size());
  const int w = std::min(spec.W, n);
  const int starts = spec.W >= n ? 1 : n - spec.W + 1;
  for (int s = 0; s < starts; ++s) {
    int count = 0, first = -1, last = -1;
    for (int j = s; j < s + w; ++j) {
      if (!mask[j]) continue;
      ++count;
      if (first < 0) first = j;
      last = j;
    }
    if (count <= spec.N) continue;
    const bool single_run = count == last - first + 1;
    if (!(single_run && count <= spec.B)) return false;
  }
  return true;
}

inline std::vector<ErasurePattern> enumerate_sliding_window(const SlidingWindowSpec& spec, int n)
{
  spec.validate();
  if (n < 1 || n > 24) throw UsageError("enumerate_sliding_window: n out of range");
  std::vector<ErasurePattern> out;
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    ErasurePattern mask = pattern_from_bits(bits, n);
    if (sliding_window_admissible(mask, spec)) out.push_back(std::move(mask));
  }
  return out;
}

/// Run-length text form "0x17,1x3,0x42" (value x run length).
inline std::string pattern_to_rle(const ErasurePattern& mask)
{
  if (mask.empty()) return "";
  std::string out;
  std::size_t start = 0;
  while (start < mask.size()) {
    std::size_t end = start;
    while (end < mask.size() && mask[end] == mask[start]) ++end;
    if (!out.empty()) out += ',';
    out += std::to_string(int(mask[start])) + "x" + std::to_string(end - start);
    start = end;
  }
  return out;
}

inline ErasurePattern pattern_from_rle(const std::string& text)
{
  ErasurePattern mask;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    const std::size_t x = item.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= item.size()) {
      throw UsageError("invalid run-length item '" + item + "'");
    }
    int value = 0;
    unsigned long run = 0;
    try {
      value = std::stoi(item.substr(0, x));
      run = std::stoul(item.substr(x + 1));
    } catch (const std::exception&) {
      throw UsageError("invalid run-length item '" + item + "'");
    }
    if ((value != 0 && value != 1) || run == 0) {
      throw UsageError("invalid run-length item '" + item + "'");
    }
    mask.insert(mask.end(), run, static_cast<std::uint8_t>(value));
    start = comma + 1;
  }
  return mask;
}

}  // namespace streamfec

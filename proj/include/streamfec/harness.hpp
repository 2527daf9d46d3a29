#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "streamfec/channel.hpp"
#include "streamfec/code.hpp"
#include "streamfec/decoder.hpp"
#include "streamfec/errors.hpp"

namespace streamfec {

/// A code under test. New codes decode block-by-block under the delay
/// constraint (maximal decoding by default; the structured-only mode is
/// recorded in the name). The MDS baseline recovers an info packet iff its
/// block of n packets carries at most n-k erasures, with worst-case delay
/// n-1 <= T.
struct Scheme
{
  enum class Kind : std::uint8_t { NewCode, Mds };

  Kind kind = Kind::NewCode;
  std::string name;
  std::string description;
  CodeParams params;  // NewCode only
  int mds_n = 0;
  int mds_k = 0;
  int mds_T = 0;
  bool sweep_enabled = true;

  static Scheme new_code(int N, int B, int T, std::optional<std::uint32_t> q = {},
                         bool sweep_enabled = true)
  {
    Scheme s;
    s.kind = Kind::NewCode;
    s.params = derive_params(N, B, T, q);
    s.sweep_enabled = sweep_enabled;
    // dashes keep the CSV scheme column free of commas
    s.name = "new:" + std::to_string(N) + "-" + std::to_string(B) + "-" + std::to_string(T);
    if (!sweep_enabled) s.name += "+nosweep";
    s.description = "burst+arbitrary erasure code, " +
                    std::string(sweep_enabled ? "maximal" : "structured-only") + " decoding";
    return s;
  }

  static Scheme mds(int n, int k, int T)
  {
    if (k < 1 || k > n) throw ParameterError("mds scheme requires 1 <= k <= n");
    if (n - 1 > T) throw ParameterError("mds scheme requires block delay n-1 <= T");
    Scheme s;
    s.kind = Kind::Mds;
    s.mds_n = n;
    s.mds_k = k;
    s.mds_T = T;
    s.name = "mds:" + std::to_string(n) + "-" + std::to_string(k) + "-" + std::to_string(T);
    s.description = "block-MDS baseline, decoded at block completion";
    return s;
  }

  /// Parses "new:N,B,T[,q]" or "mds:n,k,T".
  static Scheme parse(const std::string& descriptor, bool sweep_enabled = true)
  {
    const std::size_t colon = descriptor.find(':');
    if (colon == std::string::npos) throw UsageError("scheme descriptor needs 'kind:'");
    const std::string kind = descriptor.substr(0, colon);
    std::vector<long> nums;
    std::size_t start = colon + 1;
    while (start <= descriptor.size()) {
      std::size_t comma = descriptor.find(',', start);
      if (comma == std::string::npos) comma = descriptor.size();
      try {
        nums.push_back(std::stol(descriptor.substr(start, comma - start)));
      } catch (const std::exception&) {
        throw UsageError("bad scheme descriptor '" + descriptor + "'");
      }
      start = comma + 1;
    }
    if (kind == "new" && nums.size() == 3) {
      return new_code(int(nums[0]), int(nums[1]), int(nums[2]), {}, sweep_enabled);
    }
    if (kind == "new" && nums.size() == 4) {
      return new_code(int(nums[0]), int(nums[1]), int(nums[2]),
                      std::uint32_t(nums[3]), sweep_enabled);
    }
    if (kind == "mds" && nums.size() == 3) {
      return mds(int(nums[0]), int(nums[1]), int(nums[2]));
    }
    throw UsageError("bad scheme descriptor '" + descriptor + "'");
  }

  int block_len() const { return kind == Kind::NewCode ? params.n : mds_n; }
  int info_len() const { return kind == Kind::NewCode ? params.k : mds_k; }
  int col_N() const { return kind == Kind::NewCode ? params.N : mds_n - mds_k; }
  int col_B() const { return kind == Kind::NewCode ? params.B : mds_n - mds_k; }
  int col_T() const { return kind == Kind::NewCode ? params.T : mds_T; }
  std::uint32_t col_q() const
  {
    return kind == Kind::NewCode ? params.q
                                 : smallest_prime_at_least(std::max(mds_n, 2));
  }
};

/// MDS block rule: erased info packets are lost iff the block of n packets
/// carries more than n-k erasures in total.
inline int mds_block_losses(const ErasurePattern& block_mask, int n, int k)
{
  if (static_cast<int>(block_mask.size()) != n) {
    throw UsageError("mds_block_losses: mask length must be n");
  }
  int total = 0, info = 0;
  for (int a = 0; a < n; ++a) {
    total += block_mask[a];
    if (a < k) info += block_mask[a];
  }
  return total > n - k ? info : 0;
}

struct PLPReport
{
  std::string scheme;
  int N = 0;
  int B = 0;
  int T = 0;
  std::uint32_t q = 2;
  GEParams ge;
  std::uint64_t channel_len = 0;
  std::uint64_t seed = 0;
  std::uint64_t info_packets = 0;
  std::uint64_t lost_packets = 0;
  double plp = 0.0;
  double ci95 = 0.0;  // 95% half-width, normal approximation over block losses
};

/// One experiment: a GE erasure sequence applied to the horizontal packet
/// schedule (k info packets then n-k parities per cycle), decoded cycle by
/// cycle under the delay constraint. Only complete cycles are simulated.
/// Whole-packet erasures let one block decode per cycle stand in for all k
/// symbol lanes.
inline PLPReport run_plp(const Scheme& scheme, const GEParams& ge, std::uint64_t channel_len,
                         std::uint64_t seed)
{
  ge.validate();
  const int n = scheme.block_len();
  const int k = scheme.info_len();
  if (channel_len < static_cast<std::uint64_t>(n)) {
    throw UsageError("run_plp: channel_len must cover at least one block");
  }
  const std::uint64_t cycles = channel_len / n;

  std::optional<GeneratorMatrix> G;
  if (scheme.kind == Scheme::Kind::NewCode) G.emplace(scheme.params);
  const DecodeOptions options{scheme.sweep_enabled};

  GilbertElliott chain(ge, seed);
  ReceivedWord y;
  y.symbols.assign(n, 0);
  y.erased.assign(n, 0);

  std::uint64_t lost_sum = 0, lost_sq = 0;
  for (std::uint64_t cyc = 0; cyc < cycles; ++cyc) {
    int erased_total = 0, erased_info = 0;
    for (int a = 0; a < n; ++a) {
      const bool e = chain.step();
      y.erased[a] = e ? 1 : 0;
      erased_total += e ? 1 : 0;
      if (a < k) erased_info += e ? 1 : 0;
    }
    std::uint64_t lost = 0;
    if (erased_info > 0) {
      if (scheme.kind == Scheme::Kind::Mds) {
        lost = mds_block_losses(y.erased, n, k);
      } else if (erased_total <= scheme.params.N) {
        lost = 0;  // at most N erasures: the punctured code settles the block
      } else {
        lost = decode(y, *G, options).lost_count();
      }
    }
    lost_sum += lost;
    lost_sq += lost * lost;
  }

  PLPReport report;
  report.scheme = scheme.name;
  report.N = scheme.col_N();
  report.B = scheme.col_B();
  report.T = scheme.col_T();
  report.q = scheme.col_q();
  report.ge = ge;
  report.channel_len = channel_len;
  report.seed = seed;
  report.info_packets = cycles * k;
  report.lost_packets = lost_sum;
  report.plp = report.info_packets ? double(lost_sum) / double(report.info_packets) : 0.0;
  if (cycles >= 2) {
    const double mean = double(lost_sum) / double(cycles);
    const double var = (double(lost_sq) - double(cycles) * mean * mean) / double(cycles - 1);
    report.ci95 = 1.96 * std::sqrt(var > 0 ? var / double(cycles) : 0.0) / double(k);
  }
  return report;
}

/// Runs every (scheme, eps0) cell with its own derived seed:
/// mix64(mix64(master_seed, scheme_index), eps_index). Cells execute in
/// parallel; rows come back ordered by (scheme, eps0) as given.
inline std::vector<PLPReport> sweep(const std::vector<Scheme>& schemes, const GEParams& base,
                                    const std::vector<double>& eps0_list,
                                    std::uint64_t channel_len, std::uint64_t master_seed)
{
  if (schemes.empty() || eps0_list.empty()) throw UsageError("sweep: nothing to run");
  std::vector<std::future<PLPReport>> cells;
  cells.reserve(schemes.size() * eps0_list.size());
  for (std::size_t si = 0; si < schemes.size(); ++si) {
    for (std::size_t ei = 0; ei < eps0_list.size(); ++ei) {
      GEParams ge = base;
      ge.eps0 = eps0_list[ei];
      const std::uint64_t seed = mix64(mix64(master_seed, si), ei);
      cells.push_back(std::async(std::launch::async, run_plp, schemes[si], ge, channel_len, seed));
    }
  }
  std::vector<PLPReport> rows;
  rows.reserve(cells.size());
  for (auto& c : cells) rows.push_back(c.get());
  return rows;
}

/// Shortest decimal that round-trips the double.
inline std::string format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline const char* plp_csv_header()
{
  return "scheme,N,B,T,q,alpha,beta,eps0,eps1,channel_len,seed,info_packets,lost_packets,plp,ci95";
}

inline std::string plp_csv(const std::vector<PLPReport>& rows)
{
  std::string out = plp_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += r.scheme;
    out += ',' + std::to_string(r.N) + ',' + std::to_string(r.B) + ',' + std::to_string(r.T);
    out += ',' + std::to_string(r.q);
    out += ',' + format_double(r.ge.alpha) + ',' + format_double(r.ge.beta);
    out += ',' + format_double(r.ge.eps0) + ',' + format_double(r.ge.eps1);
    out += ',' + std::to_string(r.channel_len) + ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.info_packets) + ',' + std::to_string(r.lost_packets);
    out += ',' + format_double(r.plp) + ',' + format_double(r.ci95);
    out += '\n';
  }
  return out;
}

struct CapabilityLimits
{
  std::uint64_t max_patterns = 2'000'000;  // per family; exceeding it truncates
  bool include_sliding_window = false;
  int sliding_window_max_n = 14;
};

struct FamilyStats
{
  std::string family;
  bool guaranteed = false;  // full recovery asserted for every pattern
  std::uint64_t patterns = 0;
  std::uint64_t fully_recovered = 0;
  std::uint64_t partially_recovered = 0;  // some erased info lost, some settled
  std::uint64_t violations = 0;           // guaranteed patterns not fully recovered
  std::uint64_t delay_violations = 0;
  std::uint64_t n2_violations = 0;  // burst+arbitrary families: N2 > 2N'
  bool truncated = false;
};

struct CapabilityReport
{
  CodeParams params;
  std::vector<FamilyStats> families;

  bool clean() const
  {
    for (const auto& fam : families) {
      if (fam.violations || fam.delay_violations || fam.n2_violations) return false;
    }
    return true;
  }
};

namespace detail {

inline void tally(FamilyStats& fam, const GeneratorMatrix& G, const ErasurePattern& mask,
                  int delay_bound, int n2_bound)
{
  const CodeParams& p = G.params();
  const DecodeOutcome res = decode(ReceivedWord::from_codeword(Codeword(p.n, 0), mask), G);
  ++fam.patterns;
  const int lost = res.lost_count();
  if (lost == 0) {
    ++fam.fully_recovered;
  } else {
    int erased_info = 0;
    for (int i = 0; i < p.k; ++i) erased_info += mask[i];
    if (lost < erased_info) ++fam.partially_recovered;
    if (fam.guaranteed) ++fam.violations;
  }
  for (const auto& o : res.info) {
    if (o.status == SymbolStatus::Recovered && o.delay > delay_bound) ++fam.delay_violations;
  }
  if (n2_bound >= 0 && res.phase2_load > n2_bound) ++fam.n2_violations;
}

inline void for_each_subset(int universe, int size, const std::vector<int>& slots,
                            std::uint64_t budget, bool& truncated,
                            const std::function<void(const std::vector<int>&)>& fn)
{
  std::vector<int> pick(size);
  for (int t = 0; t < size; ++t) pick[t] = t;
  std::uint64_t emitted = 0;
  if (size > universe) return;
  while (true) {
    if (emitted++ >= budget) {
      truncated = true;
      return;
    }
    std::vector<int> chosen(size);
    for (int t = 0; t < size; ++t) chosen[t] = slots[pick[t]];
    fn(chosen);
    int t = size - 1;
    while (t >= 0 && pick[t] == universe - size + t) --t;
    if (t < 0) return;
    ++pick[t];
    for (int u = t + 1; u < size; ++u) pick[u] = pick[u - 1] + 1;
  }
}

}  // namespace detail

/// Exhaustive verification of the guaranteed recovery families, plus an
/// optional observational sliding-window family.
///
/// - arbitrary-only: every pattern of at most N erasures within the punctured
///   block recovers fully with delay strictly below T.
/// - burst-only: every burst of length B' anywhere in the codeword, asserted
///   up to B' <= B when r = 0 and up to B' <= N+r otherwise.
/// - burst+arbitrary: a length-B burst inside the non-urgent systematic
///   region plus up to floor(N/2) extra erasures at or past position B; fully
///   recovered with phase-2 load at most twice the extra-erasure count.
inline CapabilityReport capability_report(const CodeParams& params,
                                          const CapabilityLimits& limits = {})
{
  const GeneratorMatrix G(params);
  CapabilityReport report;
  report.params = params;
  const int k = params.k, n = params.n, N = params.N, B = params.B, T = params.T;

  {
    FamilyStats fam;
    fam.family = "arbitrary<=N";
    fam.guaranteed = true;
    std::vector<int> slots;
    for (int j = 0; j < k + N; ++j) slots.push_back(j);
    for (int size = 0; size <= N; ++size) {
      detail::for_each_subset(k + N, size, slots, limits.max_patterns - fam.patterns,
                              fam.truncated, [&](const std::vector<int>& chosen) {
                                ErasurePattern mask(n, 0);
                                for (int j : chosen) mask[j] = 1;
                                detail::tally(fam, G, mask, T - 1, -1);
                              });
      if (fam.truncated) break;
    }
    report.families.push_back(std::move(fam));
  }

  for (int burst = 1; burst <= B; ++burst) {
    FamilyStats fam;
    fam.family = "burst=" + std::to_string(burst);
    fam.guaranteed = burst <= (params.r == 0 ? B : N + params.r);
    for (const auto& mask : enumerate_bursts(burst, n)) {
      if (fam.patterns >= limits.max_patterns) {
        fam.truncated = true;
        break;
      }
      detail::tally(fam, G, mask, T, -1);
    }
    report.families.push_back(std::move(fam));
  }

  if (B > 0) {
    BurstPlusArbitraryOptions opt;
    opt.burst_min = B;
    opt.burst_max = k - B + 1;
    opt.arbitrary_min = B;
    for (int extra = 0; extra <= N / 2; ++extra) {
      FamilyStats fam;
      fam.family = "burst=" + std::to_string(B) + "+arbitrary=" + std::to_string(extra);
      fam.guaranteed = true;
      if (opt.burst_max >= opt.burst_min) {
        for (const auto& mask : enumerate_burst_plus_arbitrary(B, extra, n, opt)) {
          if (fam.patterns >= limits.max_patterns) {
            fam.truncated = true;
            break;
          }
          detail::tally(fam, G, mask, T, 2 * extra);
        }
      }
      report.families.push_back(std::move(fam));
    }
  }

  if (limits.include_sliding_window && n <= limits.sliding_window_max_n) {
    FamilyStats fam;
    fam.family = "sliding-window";
    fam.guaranteed = false;  // this construction does not promise zero error here
    for (const auto& mask :
         enumerate_sliding_window(SlidingWindowSpec::for_delay(N, B, T), n)) {
      if (fam.patterns >= limits.max_patterns) {
        fam.truncated = true;
        break;
      }
      detail::tally(fam, G, mask, T, -1);
    }
    report.families.push_back(std::move(fam));
  }

  return report;
}

}  // namespace streamfec

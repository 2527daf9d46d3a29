#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamfec/code.hpp"
#include "streamfec/decoder.hpp"
#include "streamfec/errors.hpp"

namespace streamfec {

enum class StreamMode : std::uint8_t { Diagonal, Horizontal };

enum class PacketKind : std::uint8_t { Info, Parity, Mixed };

/// One packet of the convolutional stream. Horizontal packets carry k symbols
/// (one lane per message index); diagonal packets carry n symbols (one lane
/// per codeword position).
struct StreamPacket
{
  int time = 0;  // 1-based
  PacketKind kind = PacketKind::Info;
  std::vector<std::uint32_t> payload;
};

struct StreamConfig
{
  StreamMode mode = StreamMode::Horizontal;
  CodeParams params;
};

struct PacketOutcome
{
  SymbolStatus status = SymbolStatus::Lost;
  int delay = -1;                     // in packets; 0 for received
  std::vector<std::uint32_t> payload;  // filled by the value-level decoder
};

namespace detail {

inline void require_payload_len(const std::vector<Message>& packets, int len)
{
  for (const auto& u : packets) {
    if (static_cast<int>(u.size()) != len) {
      throw UsageError("stream: expected packet payload length " + std::to_string(len));
    }
  }
}

}  // namespace detail

/// Emits, per group of k info packets, the k packets followed by their n-k
/// parity packets; lane j across the group's n packets is a codeword. The
/// final partial group is completed with zero packets.
inline std::vector<StreamPacket> horizontal_encode(const std::vector<Message>& info_packets,
                                                   const StreamConfig& cfg)
{
  const CodeParams& p = cfg.params;
  detail::require_payload_len(info_packets, p.k);
  const GeneratorMatrix G(p);

  const std::size_t groups = (info_packets.size() + p.k - 1) / p.k;
  std::vector<StreamPacket> out;
  out.reserve(groups * p.n);
  int time = 1;
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<Message> group(p.k, Message(p.k, 0));
    for (int a = 0; a < p.k; ++a) {
      const std::size_t src = g * p.k + a;
      if (src < info_packets.size()) group[a] = info_packets[src];
    }
    for (int a = 0; a < p.k; ++a) {
      out.push_back({time++, PacketKind::Info, group[a]});
    }
    // lane j of the cycle is the codeword of the j-th symbols of the group
    std::vector<Codeword> lanes(p.k);
    for (int j = 0; j < p.k; ++j) {
      Message m(p.k);
      for (int a = 0; a < p.k; ++a) m[a] = group[a][j];
      lanes[j] = encode(m, G);
    }
    for (int a = p.k; a < p.n; ++a) {
      StreamPacket pkt{time++, PacketKind::Parity, std::vector<std::uint32_t>(p.k, 0)};
      for (int j = 0; j < p.k; ++j) pkt.payload[j] = lanes[j][a];
      out.push_back(pkt);
    }
  }
  return out;
}

/// Emits length-n packets whose diagonals are codewords: for every start time
/// t, (x_1[t], x_2[t+1], ..., x_n[t+n-1]) is a codeword of the message
/// diagonal through times t..t+k-1. History before the stream is primed with
/// zeros and n-1 flush packets complete the trailing diagonals.
inline std::vector<StreamPacket> diagonal_encode(const std::vector<Message>& info_packets,
                                                 const StreamConfig& cfg)
{
  const CodeParams& p = cfg.params;
  detail::require_payload_len(info_packets, p.k);
  const GeneratorMatrix G(p);

  const int g = static_cast<int>(info_packets.size());
  const int total = g + p.n - 1;
  std::vector<StreamPacket> out(total);
  for (int t = 1; t <= total; ++t) {
    out[t - 1].time = t;
    out[t - 1].kind = PacketKind::Mixed;
    out[t - 1].payload.assign(p.n, 0);
    for (int a = 1; a <= p.k; ++a) {
      out[t - 1].payload[a - 1] = t <= g ? info_packets[t - 1][a - 1] : 0;
    }
  }
  for (int start = 2 - p.k; start <= g; ++start) {
    Message m(p.k, 0);
    for (int c = 1; c <= p.k; ++c) {
      const int t = start + c - 1;
      if (t >= 1 && t <= g) m[c - 1] = info_packets[t - 1][c - 1];
    }
    const Codeword x = encode(m, G);
    for (int a = p.k + 1; a <= p.n; ++a) {
      const int t = start + a - 1;
      if (t >= 1 && t <= total) out[t - 1].payload[a - 1] = x[a - 1];
    }
  }
  return out;
}

namespace detail {

inline std::vector<PacketOutcome> horizontal_decode(const std::vector<StreamPacket>* packets,
                                                    const std::vector<std::uint8_t>& erased,
                                                    const StreamConfig& cfg,
                                                    const DecodeOptions& options)
{
  const CodeParams& p = cfg.params;
  const int count = static_cast<int>(erased.size());
  if (count % p.n != 0) {
    throw UsageError("stream: horizontal schedule length must be a multiple of n");
  }
  const GeneratorMatrix G(p);
  const int cycles = count / p.n;
  std::vector<PacketOutcome> out;
  out.reserve(static_cast<std::size_t>(cycles) * p.k);
  for (int cyc = 0; cyc < cycles; ++cyc) {
    const int base = cyc * p.n;
    ReceivedWord lane;
    lane.symbols.assign(p.n, 0);
    lane.erased.assign(erased.begin() + base, erased.begin() + base + p.n);
    if (packets) {
      // all lanes share the packet-level pattern, so statuses and delays come
      // from any one lane; values are filled per lane
      std::vector<DecodeOutcome> lanes(p.k);
      for (int j = 0; j < p.k; ++j) {
        for (int a = 0; a < p.n; ++a) {
          if (lane.erased[a]) {
            lane.symbols[a] = 0;
            continue;
          }
          if (static_cast<int>((*packets)[base + a].payload.size()) != p.k) {
            throw UsageError("stream: horizontal packets carry k symbols");
          }
          lane.symbols[a] = (*packets)[base + a].payload[j];
        }
        lanes[j] = decode(lane, G, options);
      }
      for (int a = 0; a < p.k; ++a) {
        PacketOutcome po;
        po.status = lanes[0].info[a].status;
        po.delay = lanes[0].info[a].delay;
        if (po.status != SymbolStatus::Lost) {
          po.payload.resize(p.k);
          for (int j = 0; j < p.k; ++j) po.payload[j] = lanes[j].info[a].value;
        }
        out.push_back(std::move(po));
      }
    } else {
      const DecodeOutcome res = decode(lane, G, options);  // single-lane reduction
      for (int a = 0; a < p.k; ++a) {
        out.push_back({res.info[a].status, res.info[a].delay, {}});
      }
    }
  }
  return out;
}

inline std::vector<PacketOutcome> diagonal_decode(const std::vector<StreamPacket>& packets,
                                                  const std::vector<std::uint8_t>& erased,
                                                  const StreamConfig& cfg,
                                                  const DecodeOptions& options)
{
  const CodeParams& p = cfg.params;
  const int total = static_cast<int>(packets.size());
  if (total < p.n) throw UsageError("stream: diagonal stream shorter than one codeword");
  const int g = total - (p.n - 1);
  const GeneratorMatrix G(p);

  std::vector<PacketOutcome> out(g);
  for (int t = 0; t < total; ++t) {
    if (!erased[t] && static_cast<int>(packets[t].payload.size()) != p.n) {
      throw UsageError("stream: diagonal packets carry n symbols");
    }
  }
  std::vector<std::uint8_t> any_lost(g, 0);
  for (int t = 0; t < g; ++t) {
    out[t].status = erased[t] ? SymbolStatus::Recovered : SymbolStatus::Received;
    out[t].delay = erased[t] ? -1 : 0;
    out[t].payload.assign(p.k, 0);
    if (!erased[t]) out[t].payload = std::vector<std::uint32_t>(
        packets[t].payload.begin(), packets[t].payload.begin() + p.k);
  }

  for (int start = 2 - p.k; start <= g; ++start) {
    ReceivedWord y;
    y.symbols.assign(p.n, 0);
    y.erased.assign(p.n, 0);
    for (int a = 1; a <= p.n; ++a) {
      const int t = start + a - 1;
      if (t < 1) continue;  // primed history: known zeros
      y.erased[a - 1] = erased[t - 1];
      y.symbols[a - 1] = erased[t - 1] ? 0 : packets[t - 1].payload[a - 1];
    }
    const DecodeOutcome res = decode(y, G, options);
    for (int c = 1; c <= p.k; ++c) {
      const int t = start + c - 1;
      if (t < 1 || t > g || !erased[t - 1]) continue;
      const auto& sym = res.info[c - 1];
      if (sym.status == SymbolStatus::Lost) {
        any_lost[t - 1] = 1;  // the packet needs all k of its symbols
      } else {
        out[t - 1].delay = std::max(out[t - 1].delay, sym.delay);
        out[t - 1].payload[c - 1] = sym.value;
      }
    }
  }
  for (int t = 0; t < g; ++t) {
    if (any_lost[t]) {
      out[t].status = SymbolStatus::Lost;
      out[t].delay = -1;
      out[t].payload.clear();
    }
  }
  return out;
}

}  // namespace detail

/// Value-level stream decoding: one outcome per info packet (horizontal: k per
/// cycle; diagonal: one per pre-flush packet). Erasures are whole-packet.
inline std::vector<PacketOutcome> stream_decode(const std::vector<StreamPacket>& packets,
                                                const std::vector<std::uint8_t>& erased,
                                                const StreamConfig& cfg,
                                                const DecodeOptions& options = {})
{
  if (packets.size() != erased.size()) {
    throw UsageError("stream: erasure flags do not match packet count");
  }
  if (cfg.mode == StreamMode::Horizontal) {
    return detail::horizontal_decode(&packets, erased, cfg, options);
  }
  return detail::diagonal_decode(packets, erased, cfg, options);
}

/// Pattern-only decoding (statuses and delays; payloads left empty). In
/// horizontal mode a single lane is decoded per cycle, which is equivalent to
/// decoding all k lanes because whole-packet erasures give every lane the same
/// pattern.
inline std::vector<PacketOutcome> stream_decode_pattern(const std::vector<std::uint8_t>& erased,
                                                        const StreamConfig& cfg,
                                                        const DecodeOptions& options = {})
{
  if (cfg.mode == StreamMode::Horizontal) {
    return detail::horizontal_decode(nullptr, erased, cfg, options);
  }
  std::vector<StreamPacket> zeros(erased.size());
  for (std::size_t t = 0; t < zeros.size(); ++t) {
    zeros[t] = {static_cast<int>(t) + 1, PacketKind::Mixed,
                std::vector<std::uint32_t>(cfg.params.n, 0)};
  }
  return detail::diagonal_decode(zeros, erased, cfg, options);
}

}  // namespace streamfec

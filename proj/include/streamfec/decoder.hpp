#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streamfec/code.hpp"
#include "streamfec/errors.hpp"
#include "streamfec/galois.hpp"

namespace streamfec {

/// Length-n 0/1 mask; 1 marks an erased codeword position.
using ErasurePattern = std::vector<std::uint8_t>;

inline ErasurePattern pattern_from_bits(std::uint64_t bits, int n)
{
  ErasurePattern mask(n, 0);
  for (int j = 0; j < n; ++j) mask[j] = (bits >> j) & 1u;
  return mask;
}

/// A length-n word with per-position erasure marks. Symbol content at erased
/// positions is ignored.
struct ReceivedWord
{
  std::vector<std::uint32_t> symbols;
  std::vector<std::uint8_t> erased;

  static ReceivedWord from_codeword(const Codeword& x, const ErasurePattern& pattern)
  {
    if (x.size() != pattern.size()) throw UsageError("pattern length does not match codeword");
    ReceivedWord y;
    y.symbols.resize(x.size(), 0);
    y.erased.assign(pattern.begin(), pattern.end());
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!pattern[j]) y.symbols[j] = x[j];
    }
    return y;
  }

  /// Parses "1,2,?,?,4,2" ('?' marks an erasure).
  static ReceivedWord parse(const std::string& text)
  {
    ReceivedWord y;
    std::string item;
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = text.find(',', start);
      item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (item == "?") {
        y.symbols.push_back(0);
        y.erased.push_back(1);
      } else {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
          v = std::stoul(item, &used);
        } catch (const std::exception&) {
          throw UsageError("invalid symbol '" + item + "'");
        }
        if (used != item.size()) throw UsageError("invalid symbol '" + item + "'");
        y.symbols.push_back(static_cast<std::uint32_t>(v));
        y.erased.push_back(0);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return y;
  }

  std::string str() const
  {
    std::string out;
    for (std::size_t j = 0; j < symbols.size(); ++j) {
      if (j) out += ',';
      out += erased[j] ? std::string("?") : std::to_string(symbols[j]);
    }
    return out;
  }
};

enum class SymbolStatus : std::uint8_t { Received, Recovered, Lost };

enum class RecoveryPhase : std::uint8_t { None, RsShortcut, Urgent, Phase1, Phase2, Sweep };

inline const char* to_string(SymbolStatus s)
{
  switch (s) {
    case SymbolStatus::Received: return "received";
    case SymbolStatus::Recovered: return "recovered";
    default: return "lost";
  }
}

inline const char* to_string(RecoveryPhase p)
{
  switch (p) {
    case RecoveryPhase::RsShortcut: return "rs_shortcut";
    case RecoveryPhase::Urgent: return "urgent";
    case RecoveryPhase::Phase1: return "phase1";
    case RecoveryPhase::Phase2: return "phase2";
    case RecoveryPhase::Sweep: return "sweep";
    default: return "-";
  }
}

struct PositionOutcome
{
  SymbolStatus status = SymbolStatus::Lost;
  RecoveryPhase phase = RecoveryPhase::None;
  int delay = -1;
  std::uint32_t value = 0;
};

/// Per-message-position decode result. info[t] describes u_{t+1}.
struct DecodeOutcome
{
  std::vector<PositionOutcome> info;
  int phase2_load = 0;       // erased message symbols entering phase 2
  std::uint64_t field_ops = 0;

  bool fully_recovered() const
  {
    for (const auto& o : info) {
      if (o.status == SymbolStatus::Lost) return false;
    }
    return true;
  }

  int lost_count() const
  {
    int c = 0;
    for (const auto& o : info) c += o.status == SymbolStatus::Lost ? 1 : 0;
    return c;
  }
};

struct DecodeOptions
{
  /// When false, positions the structured phases cannot settle are reported
  /// lost without consulting the prefix rank test.
  bool enable_sweep = true;
};

/// Last position usable for decoding position i (1-based): min(i+T, n).
inline int deadline(int position, const CodeParams& p)
{
  if (position < 1 || position > p.n) throw UsageError("deadline: position out of range");
  return std::min(position + p.T, p.n);
}

namespace detail {

/// Row-reduces [cols | target] over GF(q). On success returns one coefficient
/// per column expressing target as a combination of the columns (leftmost
/// pivoting, so non-pivot columns get coefficient 0); nullopt if target is
/// outside the span.
inline std::optional<std::vector<std::uint32_t>> solve_columns(
    const Field& f, int k, const std::vector<std::vector<std::uint32_t>>& cols,
    const std::vector<std::uint32_t>& target, std::uint64_t& ops)
{
  const int m = static_cast<int>(cols.size());
  std::vector<std::uint32_t> a(static_cast<std::size_t>(k) * (m + 1), 0);
  auto at = [&](int row, int col) -> std::uint32_t& { return a[static_cast<std::size_t>(row) * (m + 1) + col]; };
  for (int c = 0; c < m; ++c) {
    for (int row = 0; row < k; ++row) at(row, c) = cols[c][row];
  }
  for (int row = 0; row < k; ++row) at(row, m) = target[row];

  std::vector<int> pivot_cols;
  int rank = 0;
  for (int c = 0; c < m && rank < k; ++c) {
    int pr = -1;
    for (int row = rank; row < k; ++row) {
      if (at(row, c) != 0) { pr = row; break; }
    }
    if (pr < 0) continue;
    if (pr != rank) {
      for (int j = c; j <= m; ++j) std::swap(at(pr, j), at(rank, j));
    }
    const std::uint32_t scale = f.inv(at(rank, c));
    ++ops;
    for (int j = c; j <= m; ++j) {
      at(rank, j) = f.mul(at(rank, j), scale);
      ++ops;
    }
    for (int row = 0; row < k; ++row) {
      if (row == rank || at(row, c) == 0) continue;
      const std::uint32_t factor = at(row, c);
      for (int j = c; j <= m; ++j) {
        at(row, j) = f.sub(at(row, j), f.mul(factor, at(rank, j)));
        ops += 2;
      }
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (int row = rank; row < k; ++row) {
    if (at(row, m) != 0) return std::nullopt;
  }
  std::vector<std::uint32_t> coeffs(m, 0);
  for (int t = 0; t < rank; ++t) coeffs[pivot_cols[t]] = at(t, m);
  return coeffs;
}

/// Solves sum_i x_i / (a_i - b_j) = rhs_j over GF(q) for distinct points, in
/// O(m^2) field operations: the left side is the rational function
/// sum_i x_i/(a_i - z) evaluated at the b_j, so its degree-(m-1) numerator is
/// interpolated through the b_j and the x_i read off as residues at the a_i.
inline std::vector<std::uint32_t> solve_cauchy_system(
    const Field& f, const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
    const std::vector<std::uint32_t>& rhs, std::uint64_t& ops)
{
  if (a.size() != b.size() || a.size() != rhs.size()) {
    throw UsageError("solve_cauchy_system: point and rhs counts must match");
  }
  const int m = static_cast<int>(a.size());
  std::vector<std::uint32_t> x(m, 0);
  if (m == 0) return x;

  // numerator values at the b_j: P(b_j) = -rhs_j * prod_i (b_j - a_i)
  std::vector<std::uint32_t> scaled(m);
  for (int j = 0; j < m; ++j) {
    std::uint32_t prod = 1;
    for (int i = 0; i < m; ++i) {
      prod = f.mul(prod, f.sub(b[j], a[i]));
      ops += 2;
    }
    scaled[j] = f.neg(f.mul(rhs[j], prod));
    ops += 2;
  }
  // barycentric weights over the interpolation nodes b
  std::vector<std::uint32_t> node_term(m);
  for (int j = 0; j < m; ++j) {
    std::uint32_t w = 1;
    for (int l = 0; l < m; ++l) {
      if (l == j) continue;
      w = f.mul(w, f.sub(b[j], b[l]));
      ops += 2;
    }
    node_term[j] = f.mul(scaled[j], f.inv(w));
    ops += 2;
  }
  for (int i = 0; i < m; ++i) {
    std::uint32_t ell = 1;
    std::uint32_t sum = 0;
    for (int l = 0; l < m; ++l) {
      ell = f.mul(ell, f.sub(a[i], b[l]));
      ops += 2;
    }
    for (int j = 0; j < m; ++j) {
      sum = f.add(sum, f.mul(node_term[j], f.inv(f.sub(a[i], b[j]))));
      ops += 4;
    }
    std::uint32_t dq = 1;
    for (int l = 0; l < m; ++l) {
      if (l == i) continue;
      dq = f.mul(dq, f.sub(a[i], a[l]));
      ops += 2;
    }
    x[i] = f.mul(f.mul(ell, sum), f.inv(dq));
    ops += 3;
  }
  return x;
}

}  // namespace detail

/// Rank test for the recoverability of message position i (1-based) under the
/// delay constraint: true iff the i-th unit vector lies in the span of the
/// generator columns at unerased positions up to deadline(i).
inline bool oracle_recoverable(const ErasurePattern& pattern, int position,
                               const GeneratorMatrix& G)
{
  const CodeParams& p = G.params();
  if (static_cast<int>(pattern.size()) != p.n) {
    throw UsageError("oracle_recoverable: pattern length must be n");
  }
  if (position < 1 || position > p.k) {
    throw UsageError("oracle_recoverable: position must name a message symbol");
  }
  if (!pattern[position - 1]) return true;
  const int dl = deadline(position, p);
  std::vector<std::vector<std::uint32_t>> cols;
  for (int j = 0; j < dl; ++j) {
    if (!pattern[j]) cols.push_back(G.column(j));
  }
  std::vector<std::uint32_t> target(p.k, 0);
  target[position - 1] = 1;
  std::uint64_t ops = 0;
  return detail::solve_columns(G.field(), p.k, cols, target, ops).has_value();
}

/// Solves the (k+N, k) punctured system for the given unknown positions
/// (1-based, all within 1..k+N). Every erased position of the punctured block
/// must be listed. Returns (position, value) pairs in input order.
inline std::vector<std::pair<int, std::uint32_t>> punctured_rs_solve(
    const ReceivedWord& y, const GeneratorMatrix& G, const std::vector<int>& unknowns)
{
  const CodeParams& p = G.params();
  const Field& f = G.field();
  if (static_cast<int>(y.symbols.size()) != p.n || static_cast<int>(y.erased.size()) != p.n) {
    throw UsageError("punctured_rs_solve: expected n=" + std::to_string(p.n) + " symbols");
  }
  if (static_cast<int>(unknowns.size()) > p.N) {
    throw CapacityError("punctured_rs_solve: " + std::to_string(unknowns.size()) +
                        " unknowns exceed N=" + std::to_string(p.N));
  }
  std::vector<std::uint8_t> is_unknown(p.k + p.N, 0);
  for (int pos : unknowns) {
    if (pos < 1 || pos > p.k + p.N) {
      throw UsageError("punctured_rs_solve: unknown position out of the punctured block");
    }
    if (!y.erased[pos - 1]) {
      throw UsageError("punctured_rs_solve: unknown position is not erased");
    }
    is_unknown[pos - 1] = 1;
  }
  for (int j = 0; j < p.k + p.N; ++j) {
    if (y.erased[j] && !is_unknown[j]) {
      throw UsageError("punctured_rs_solve: erased punctured position not listed as unknown");
    }
  }

  std::vector<int> info_rows;
  for (int i = 0; i < p.k; ++i) {
    if (is_unknown[i]) info_rows.push_back(i);
  }
  std::vector<int> eqs;
  for (int j = 0; j < p.N && static_cast<int>(eqs.size()) < static_cast<int>(info_rows.size()); ++j) {
    if (!y.erased[p.k + j] && !is_unknown[p.k + j]) eqs.push_back(j);
  }
  std::uint64_t ops = 0;
  std::vector<std::uint32_t> rhs(eqs.size());
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    std::uint32_t acc = y.symbols[p.k + eqs[e]];
    for (int i = 0; i < p.k; ++i) {
      if (is_unknown[i]) continue;
      acc = f.sub(acc, f.mul(G.cauchy(i, eqs[e]), y.symbols[i]));
    }
    rhs[e] = acc;
  }
  std::vector<std::uint32_t> pa(info_rows.size()), pb(eqs.size());
  for (std::size_t t = 0; t < info_rows.size(); ++t) pa[t] = G.cauchy_point_a(info_rows[t]);
  for (std::size_t e = 0; e < eqs.size(); ++e) pb[e] = G.cauchy_point_b(eqs[e]);
  const auto solved = detail::solve_cauchy_system(f, pa, pb, rhs, ops);

  Message u(p.k, 0);
  for (int i = 0; i < p.k; ++i) {
    if (!is_unknown[i]) u[i] = y.symbols[i];
  }
  for (std::size_t t = 0; t < info_rows.size(); ++t) u[info_rows[t]] = solved[t];

  std::vector<std::pair<int, std::uint32_t>> out;
  out.reserve(unknowns.size());
  for (int pos : unknowns) {
    if (pos <= p.k) {
      out.emplace_back(pos, u[pos - 1]);
    } else {
      const int j = pos - 1 - p.k;
      std::uint32_t acc = 0;
      for (int i = 0; i < p.k; ++i) acc = f.add(acc, f.mul(G.cauchy(i, j), u[i]));
      out.emplace_back(pos, acc);
    }
  }
  return out;
}

/// Delay-constrained erasure decoding.
///
/// Order of work: punctured-RS shortcut when the punctured block carries at
/// most N erasures; urgent pass over u_1..u_{B-1} via their interleaved
/// checks, re-testing the shortcut after every recovery; phase 1 over all
/// checks with a single erased summand; phase 2 through the RS parities; and
/// finally a completion sweep that settles every remaining position by the
/// prefix rank test, so the recovered set is exactly the recoverable set.
///
/// A recovered value becomes available at the largest position its computation
/// reads, tracing through previously recovered inputs; that position minus the
/// symbol's own index is the reported delay. Recoveries that would land past a
/// position's deadline are discarded rather than reported late, and the sweep
/// has the final word on such positions. Lost is final: a position whose
/// deadline prefix cannot determine it is lost even if later symbols could.
inline DecodeOutcome decode(const ReceivedWord& y, const GeneratorMatrix& G,
                            const DecodeOptions& options = {})
{
  const CodeParams& p = G.params();
  const Field& f = G.field();
  const int k = p.k, n = p.n, N = p.N, B = p.B;
  if (static_cast<int>(y.symbols.size()) != n || static_cast<int>(y.erased.size()) != n) {
    throw UsageError("decode: expected n=" + std::to_string(n) + " symbols, got " +
                     std::to_string(y.symbols.size()));
  }

  DecodeOutcome out;
  out.info.resize(k);
  std::vector<std::uint32_t> value(n, 0);
  std::vector<std::uint8_t> known(n, 0);
  std::vector<int> avail(n, 0);  // 1-based position by which the value is on hand
  std::uint64_t ops = 0;

  for (int j = 0; j < n; ++j) {
    if (y.erased[j]) continue;
    if (y.symbols[j] >= p.q) {
      throw UsageError("decode: symbol " + std::to_string(y.symbols[j]) + " not in GF(q)");
    }
    known[j] = 1;
    value[j] = y.symbols[j];
    avail[j] = j + 1;
  }
  for (int i = 0; i < k; ++i) {
    if (known[i]) out.info[i] = {SymbolStatus::Received, RecoveryPhase::None, 0, value[i]};
  }

  int unknown_punctured = 0;
  for (int j = 0; j < k + N; ++j) unknown_punctured += known[j] ? 0 : 1;

  const auto mark = [&](int row, std::uint32_t v, int at, RecoveryPhase phase) -> bool {
    if (at > deadline(row + 1, p)) return false;  // late recovery: leave for the sweep
    known[row] = 1;
    value[row] = v;
    avail[row] = at;
    out.info[row] = {SymbolStatus::Recovered, phase, at - (row + 1), v};
    --unknown_punctured;
    return true;
  };

  const auto solve_punctured = [&](RecoveryPhase phase) {
    std::vector<int> rows;
    for (int i = 0; i < k; ++i) {
      if (!known[i]) rows.push_back(i);
    }
    if (rows.empty()) return;
    std::vector<int> eqs;
    for (int j = 0; j < N && eqs.size() < rows.size(); ++j) {
      if (known[k + j]) eqs.push_back(j);
    }
    int at = 0;
    for (int i = 0; i < k; ++i) {
      if (known[i]) at = std::max(at, avail[i]);
    }
    std::vector<std::uint32_t> rhs(eqs.size());
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      const int j = eqs[e];
      at = std::max(at, avail[k + j]);
      std::uint32_t acc = value[k + j];
      for (int i = 0; i < k; ++i) {
        if (!known[i]) continue;
        acc = f.sub(acc, f.mul(G.cauchy(i, j), value[i]));
        ops += 2;
      }
      rhs[e] = acc;
    }
    std::vector<std::uint32_t> pa(rows.size()), pb(eqs.size());
    for (std::size_t t = 0; t < rows.size(); ++t) pa[t] = G.cauchy_point_a(rows[t]);
    for (std::size_t e = 0; e < eqs.size(); ++e) pb[e] = G.cauchy_point_b(eqs[e]);
    const auto solved = detail::solve_cauchy_system(f, pa, pb, rhs, ops);
    for (std::size_t t = 0; t < rows.size(); ++t) mark(rows[t], solved[t], at, phase);
  };

  // recovers the sole missing summand of check c from the check symbol
  const auto resolve_check = [&](int c, RecoveryPhase phase) -> bool {
    const int cpos = k + N + c;
    if (!known[cpos]) return false;
    int missing = -1;
    for (int s : G.check_support(c)) {
      if (known[s]) continue;
      if (missing >= 0) return false;  // two gaps, check unusable
      missing = s;
    }
    if (missing < 0) return false;
    std::uint32_t v = value[cpos];
    int at = avail[cpos];
    for (int s : G.check_support(c)) {
      if (s == missing) continue;
      v = f.sub(v, value[s]);
      ++ops;
      at = std::max(at, avail[s]);
    }
    return mark(missing, v, at, phase);
  };

  bool terminated = false;
  if (unknown_punctured <= N) {
    solve_punctured(RecoveryPhase::RsShortcut);
    terminated = true;
  }
  if (!terminated) {
    for (int i = 0; i + 1 < B; ++i) {  // urgent symbols u_1..u_{B-1}
      if (known[i]) continue;
      if (!resolve_check(i, RecoveryPhase::Urgent)) continue;
      if (unknown_punctured <= N) {
        solve_punctured(RecoveryPhase::RsShortcut);
        terminated = true;
        break;
      }
    }
  }
  if (!terminated) {
    for (int c = 0; c < B; ++c) resolve_check(c, RecoveryPhase::Phase1);
    int still_erased = 0;
    for (int i = 0; i < k; ++i) still_erased += known[i] ? 0 : 1;
    out.phase2_load = still_erased;
    if (still_erased > 0 && unknown_punctured <= N) solve_punctured(RecoveryPhase::Phase2);
  }

  if (options.enable_sweep) {
    for (int i = 0; i < k; ++i) {
      if (known[i]) continue;
      const int dl = deadline(i + 1, p);
      std::vector<std::vector<std::uint32_t>> cols;
      std::vector<int> positions;
      for (int j = 0; j < dl; ++j) {
        if (y.erased[j]) continue;
        cols.push_back(G.column(j));
        positions.push_back(j + 1);
      }
      std::vector<std::uint32_t> target(k, 0);
      target[i] = 1;
      const auto coeffs = detail::solve_columns(f, k, cols, target, ops);
      if (!coeffs) continue;  // unrecoverable by its deadline: lost
      std::uint32_t v = 0;
      int at = 0;
      for (std::size_t t = 0; t < coeffs->size(); ++t) {
        if ((*coeffs)[t] == 0) continue;
        v = f.add(v, f.mul((*coeffs)[t], y.symbols[positions[t] - 1]));
        ops += 2;
        at = std::max(at, positions[t]);
      }
      mark(i, v, at, RecoveryPhase::Sweep);
    }
  }

  // a received parity whose summands all ended up on hand must re-derive
  for (int j = 0; j < N; ++j) {
    if (y.erased[k + j]) continue;
    bool all_known = true;
    for (int i = 0; i < k && all_known; ++i) all_known = known[i];
    if (!all_known) continue;
    std::uint32_t acc = 0;
    for (int i = 0; i < k; ++i) {
      acc = f.add(acc, f.mul(G.cauchy(i, j), value[i]));
      ops += 2;
    }
    if (acc != value[k + j]) {
      throw IntegrityError("received word is not the restriction of any codeword");
    }
  }
  for (int c = 0; c < B; ++c) {
    if (y.erased[k + N + c]) continue;
    bool all_known = true;
    std::uint32_t acc = 0;
    for (int s : G.check_support(c)) {
      if (!known[s]) {
        all_known = false;
        break;
      }
      acc = f.add(acc, value[s]);
      ++ops;
    }
    if (all_known && acc != value[k + N + c]) {
      throw IntegrityError("received word is not the restriction of any codeword");
    }
  }

  out.field_ops = ops;
  return out;
}

}  // namespace streamfec

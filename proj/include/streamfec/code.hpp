#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "streamfec/errors.hpp"
#include "streamfec/galois.hpp"

namespace streamfec {

/// Reduced fraction, used for code rates.
struct Rational
{
  long long num = 0;
  long long den = 1;

  static Rational reduced(long long num, long long den)
  {
    const long long g = std::gcd(num, den);
    return {num / g, den / g};
  }

  std::string str() const
  {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  bool operator==(const Rational&) const = default;
};

/// Design tuple (N, B, T, q) together with every derived quantity.
///
/// N bounds the arbitrary-erasure design target, B the burst design target,
/// T the maximum decoding delay. The block code has k = T - N message
/// symbols and n = T + B codeword symbols over GF(q) with prime q >= T.
/// When B > 0, k = Q*B + r with 0 <= r < B.
struct CodeParams
{
  int N = 0;
  int B = 0;
  int T = 0;
  std::uint32_t q = 2;
  int k = 0;
  int n = 0;
  int Q = 0;
  int r = 0;
  Rational rate;
};

inline CodeParams derive_params(int N, int B, int T, std::optional<std::uint32_t> q = {})
{
  if (N < 0 || B < 0) throw ParameterError("N and B must be non-negative");
  if (N + B == 0) throw ParameterError("N + B must be at least 1");
  if (N + B > T) throw ParameterError("B + N must not exceed T");
  CodeParams p;
  p.N = N;
  p.B = B;
  p.T = T;
  p.k = T - N;
  p.n = T + B;
  if (p.k < 1) throw ParameterError("message length k = T - N must be at least 1");
  if (q) {
    if (*q < static_cast<std::uint32_t>(T)) {
      throw ParameterError("field size q must be at least T");
    }
    if (!is_prime(*q)) throw ParameterError("field size q must be prime");
    if (*q > kMaxModulus) throw ParameterError("field size q exceeds the supported range");
    p.q = *q;
  } else {
    p.q = smallest_prime_at_least(std::max(T, 2));
  }
  p.Q = B > 0 ? p.k / B : 0;
  p.r = B > 0 ? p.k % B : 0;
  p.rate = Rational::reduced(p.k, p.n);
  return p;
}

/// Best sliding-window rate (T+1-N)/(T+1-N+B), reported so the gap of this
/// construction to that optimum can be quoted alongside its own rate.
inline Rational optimal_sliding_window_rate(int N, int B, int T)
{
  if (N < 0 || B < 0 || N + B > T) throw ParameterError("invalid (N, B, T)");
  return Rational::reduced(T + 1 - N, T + 1 - N + B);
}

using Message = std::vector<std::uint32_t>;
using Codeword = std::vector<std::uint32_t>;

/// Systematic k x n generator [ I | Cauchy block | interleaved checks ].
///
/// Cauchy evaluation points are fixed to a_i = i-1 and b_j = k+j-1 so that
/// codewords are reproducible across implementations; q >= T = k+N keeps the
/// points distinct. Interleaved check c sums every B-th message symbol
/// starting at c, plus the remainder symbol u_{k-r+c} when c <= r. The check
/// supports partition {1..k}.
class GeneratorMatrix
{
public:
  explicit GeneratorMatrix(const CodeParams& params)
    : params_{params}, field_{params.q}, entries_(static_cast<std::size_t>(params.k) * params.n, 0)
  {
    const int k = params_.k, N = params_.N, B = params_.B;
    cauchy_a_.resize(k);
    for (int i = 0; i < k; ++i) cauchy_a_[i] = static_cast<std::uint32_t>(i);
    cauchy_b_.resize(N);
    for (int j = 0; j < N; ++j) cauchy_b_[j] = static_cast<std::uint32_t>(k + j);

    for (int i = 0; i < k; ++i) entries_[idx(i, i)] = 1;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < N; ++j) {
        entries_[idx(i, k + j)] = field_.inv(field_.sub(cauchy_a_[i], cauchy_b_[j]));
      }
    }

    check_support_.resize(B);
    column_of_info_.assign(k, -1);
    for (int c = 0; c < B; ++c) {
      for (int m = 0; m < params_.Q; ++m) check_support_[c].push_back(c + m * B);
      if (c < params_.r) check_support_[c].push_back(k - params_.r + c);
      for (int row : check_support_[c]) {
        entries_[idx(row, k + N + c)] = 1;
        column_of_info_[row] = c;
      }
    }
  }

  const CodeParams& params() const noexcept { return params_; }
  const Field& field() const noexcept { return field_; }

  /// Entry at row i, column j (0-based).
  std::uint32_t entry(int i, int j) const { return entries_[idx(i, j)]; }

  /// Cauchy block entry for message row i and parity column j (0-based).
  std::uint32_t cauchy(int i, int j) const { return entries_[idx(i, params_.k + j)]; }

  std::uint32_t cauchy_point_a(int i) const { return cauchy_a_[i]; }
  std::uint32_t cauchy_point_b(int j) const { return cauchy_b_[j]; }

  /// 0-based message rows summed by interleaved check c (0-based).
  const std::vector<int>& check_support(int c) const { return check_support_[c]; }

  /// 0-based check column that message row i contributes to (-1 iff B == 0).
  int column_of_info(int i) const { return column_of_info_[i]; }

  /// Column j as a length-k vector (0-based).
  std::vector<std::uint32_t> column(int j) const
  {
    std::vector<std::uint32_t> col(params_.k);
    for (int i = 0; i < params_.k; ++i) col[i] = entries_[idx(i, j)];
    return col;
  }

private:
  std::size_t idx(int i, int j) const
  {
    return static_cast<std::size_t>(i) * params_.n + j;
  }

  CodeParams params_;
  Field field_;
  std::vector<std::uint32_t> entries_;
  std::vector<std::uint32_t> cauchy_a_;
  std::vector<std::uint32_t> cauchy_b_;
  std::vector<std::vector<int>> check_support_;
  std::vector<int> column_of_info_;
};

inline GeneratorMatrix build_generator(const CodeParams& params)
{
  return GeneratorMatrix(params);
}

inline Codeword encode(const Message& u, const GeneratorMatrix& G)
{
  const CodeParams& p = G.params();
  const Field& f = G.field();
  if (static_cast<int>(u.size()) != p.k) {
    throw UsageError("encode: expected k=" + std::to_string(p.k) + " symbols, got " +
                     std::to_string(u.size()));
  }
  for (std::uint32_t v : u) {
    if (v >= p.q) throw UsageError("encode: symbol " + std::to_string(v) + " not in GF(q)");
  }
  Codeword x(p.n, 0);
  for (int i = 0; i < p.k; ++i) x[i] = u[i];
  for (int j = 0; j < p.N; ++j) {
    std::uint32_t acc = 0;
    for (int i = 0; i < p.k; ++i) acc = f.add(acc, f.mul(G.cauchy(i, j), u[i]));
    x[p.k + j] = acc;
  }
  for (int c = 0; c < p.B; ++c) {
    std::uint32_t acc = 0;
    for (int row : G.check_support(c)) acc = f.add(acc, u[row]);
    x[p.k + p.N + c] = acc;
  }
  return x;
}

/// Comma-separated decimal text form, e.g. "1,2,3".
inline std::string format_symbols(const std::vector<std::uint32_t>& symbols)
{
  std::string out;
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    if (t) out += ',';
    out += std::to_string(symbols[t]);
  }
  return out;
}

inline std::vector<std::uint32_t> parse_symbols(const std::string& text)
{
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid symbol '" + item + "'");
    }
    if (used != item.size()) throw UsageError("invalid symbol '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw UsageError("empty symbol list");
  return out;
}

}  // namespace streamfec

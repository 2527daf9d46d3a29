#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "streamfec/streamfec.hpp"

using namespace streamfec;

namespace {

std::optional<std::uint32_t> opt_field(long long q) { return q > 0 ? std::optional<std::uint32_t>(static_cast<std::uint32_t>(q)) : std::nullopt; }

std::vector<double> parse_double_list(const std::string& text)
{
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("bad number '" + item + "'");
    } catch (const std::exception&) {
      throw UsageError("bad number '" + item + "'");
    }
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

int run_params(int N, int B, int T, long long q)
{
  const CodeParams p = derive_params(N, B, T, opt_field(q));
  std::cout << "N=" << p.N << " B=" << p.B << " T=" << p.T << " n=" << p.n << " k=" << p.k
            << " q=" << p.q << " Q=" << p.Q << " r=" << p.r << " rate=" << p.rate.str()
            << " optimal_rate=" << optimal_sliding_window_rate(p.N, p.B, p.T).str() << "\n";
  return 0;
}

int run_encode(int N, int B, int T, long long q, const std::string& message)
{
  const CodeParams p = derive_params(N, B, T, opt_field(q));
  const GeneratorMatrix G(p);
  const Message u = parse_symbols(message);
  if (static_cast<int>(u.size()) != p.k) {
    throw UsageError("expected k=" + std::to_string(p.k) + " symbols, got " +
                     std::to_string(u.size()));
  }
  std::cout << format_symbols(encode(u, G)) << "\n";
  return 0;
}

int run_decode(int N, int B, int T, long long q, const std::string& received, bool no_sweep)
{
  const CodeParams p = derive_params(N, B, T, opt_field(q));
  const GeneratorMatrix G(p);
  const ReceivedWord y = ReceivedWord::parse(received);
  if (static_cast<int>(y.symbols.size()) != p.n) {
    throw UsageError("expected n=" + std::to_string(p.n) + " symbols, got " +
                     std::to_string(y.symbols.size()));
  }
  const DecodeOutcome out = decode(y, G, {.enable_sweep = !no_sweep});
  for (int i = 0; i < p.k; ++i) {
    const auto& o = out.info[i];
    std::cout << "u" << (i + 1) << " " << to_string(o.status);
    if (o.status == SymbolStatus::Recovered) std::cout << " phase=" << to_string(o.phase);
    if (o.status != SymbolStatus::Lost) {
      std::cout << " delay=" << o.delay << " value=" << o.value;
    }
    std::cout << "\n";
  }
  std::cout << "N2=" << out.phase2_load << "\n";
  return 0;
}

int run_capability(int N, int B, int T, long long q, bool with_sliding_window,
                   std::uint64_t max_patterns)
{
  const CodeParams p = derive_params(N, B, T, opt_field(q));
  CapabilityLimits limits;
  limits.include_sliding_window = with_sliding_window;
  limits.max_patterns = max_patterns;
  const CapabilityReport report = capability_report(p, limits);
  for (const auto& fam : report.families) {
    std::cout << "family=" << fam.family << " guaranteed=" << (fam.guaranteed ? "yes" : "no")
              << " patterns=" << fam.patterns << " fully=" << fam.fully_recovered
              << " partial=" << fam.partially_recovered << " violations=" << fam.violations
              << " delay_violations=" << fam.delay_violations
              << " n2_violations=" << fam.n2_violations
              << " truncated=" << (fam.truncated ? "yes" : "no") << "\n";
  }
  return report.clean() ? 0 : 4;
}

int run_oracle_diff(int N, int B, int T, long long q, bool exhaustive, long long samples,
                    std::uint64_t seed, bool force)
{
  const CodeParams p = derive_params(N, B, T, opt_field(q));
  const GeneratorMatrix G(p);
  if (exhaustive && p.n > 14 && !force) {
    throw UsageError("exhaustive sweep over 2^" + std::to_string(p.n) +
                     " patterns needs --force");
  }
  if (!exhaustive && samples < 0) throw UsageError("--samples must be non-negative");

  Message u(p.k);
  for (int i = 0; i < p.k; ++i) u[i] = static_cast<std::uint32_t>((1 + i) % p.q);
  const Codeword x = encode(u, G);

  std::uint64_t patterns = 0, mismatches = 0, delay_violations = 0, value_errors = 0;
  const auto check_pattern = [&](const ErasurePattern& mask) {
    ++patterns;
    const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask), G);
    for (int i = 1; i <= p.k; ++i) {
      const auto& o = out.info[i - 1];
      const bool decoded = o.status != SymbolStatus::Lost;
      if (decoded != oracle_recoverable(mask, i, G)) ++mismatches;
      if (decoded && o.delay > p.T) ++delay_violations;
      if (decoded && o.value != u[i - 1]) ++value_errors;
    }
  };

  if (exhaustive) {
    for (std::uint64_t bits = 0; bits < (1ull << p.n); ++bits) {
      check_pattern(pattern_from_bits(bits, p.n));
    }
  } else {
    for (long long s = 0; s < samples; ++s) {
      check_pattern(pattern_from_bits(mix64(seed, static_cast<std::uint64_t>(s)), p.n));
    }
  }
  std::cout << "patterns=" << patterns << " mismatches=" << mismatches
            << " delay_violations=" << delay_violations << " value_errors=" << value_errors
            << "\n";
  return (mismatches || delay_violations || value_errors) ? 4 : 0;
}

int run_simulate(const std::string& codes, double alpha, double beta,
                 const std::string& eps0_list, double eps1, std::uint64_t len,
                 std::uint64_t seed, const std::string& out_path, bool no_sweep)
{
  std::vector<Scheme> schemes;
  std::size_t start = 0;
  while (start <= codes.size()) {
    std::size_t semi = codes.find(';', start);
    if (semi == std::string::npos) semi = codes.size();
    schemes.push_back(Scheme::parse(codes.substr(start, semi - start), !no_sweep));
    start = semi + 1;
  }
  GEParams base{alpha, beta, 0.0, eps1};
  const std::vector<PLPReport> rows = sweep(schemes, base, parse_double_list(eps0_list), len, seed);
  const std::string csv = plp_csv(rows);
  if (out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file '" + out_path + "'");
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"low-delay erasure code for mixed burst and arbitrary packet loss"};
  app.require_subcommand(1);

  int N = 0, B = 0, T = 0;
  long long q = 0;
  const auto add_code_options = [&](CLI::App* cmd) {
    cmd->add_option("--N", N, "arbitrary-erasure design parameter")->required();
    cmd->add_option("--B", B, "burst design parameter")->required();
    cmd->add_option("--T", T, "maximum decoding delay")->required();
    cmd->add_option("--q", q, "field size (default: least prime >= T)");
  };

  auto* params_cmd = app.add_subcommand("params", "derive and print code parameters");
  add_code_options(params_cmd);

  auto* encode_cmd = app.add_subcommand("encode", "encode a message");
  add_code_options(encode_cmd);
  std::string message;
  encode_cmd->add_option("--message", message, "comma-separated symbols, e.g. 1,2,3")->required();

  auto* decode_cmd = app.add_subcommand("decode", "decode a received word");
  add_code_options(decode_cmd);
  std::string received;
  bool no_sweep = false;
  decode_cmd->add_option("--received", received, "received word, '?' marks erasures")->required();
  decode_cmd->add_flag("--no-sweep", no_sweep, "structured phases only");

  auto* capability_cmd = app.add_subcommand("capability", "verify recovery families");
  add_code_options(capability_cmd);
  bool with_sw = false;
  std::uint64_t max_patterns = 2'000'000;
  capability_cmd->add_flag("--sliding-window", with_sw, "include the sliding-window family");
  capability_cmd->add_option("--max-patterns", max_patterns, "per-family enumeration budget");

  auto* oracle_cmd = app.add_subcommand("oracle-diff", "compare decode against the rank test");
  add_code_options(oracle_cmd);
  bool exhaustive = false, force = false;
  long long samples = -1;
  std::uint64_t oracle_seed = 1;
  oracle_cmd->add_flag("--exhaustive", exhaustive, "all 2^n patterns");
  oracle_cmd->add_option("--samples", samples, "number of sampled patterns");
  oracle_cmd->add_option("--seed", oracle_seed, "sample seed");
  oracle_cmd->add_flag("--force", force, "allow exhaustive runs past n=14");

  auto* simulate_cmd = app.add_subcommand("simulate", "PLP sweep over the GE channel");
  std::string codes, eps0_list, out_path = "-";
  double alpha = 0.0, beta = 0.0, eps1 = 1.0;
  std::uint64_t len = 0, sim_seed = 1;
  bool sim_no_sweep = false;
  simulate_cmd->add_option("--codes", codes, "schemes, e.g. new:4,7,15;mds:16,8,15")->required();
  simulate_cmd->add_option("--alpha", alpha, "good->bad transition probability")->required();
  simulate_cmd->add_option("--beta", beta, "bad->good transition probability")->required();
  simulate_cmd->add_option("--eps0-list", eps0_list, "good-state erasure probabilities")->required();
  simulate_cmd->add_option("--eps1", eps1, "bad-state erasure probability (default 1)");
  simulate_cmd->add_option("--len", len, "channel length in packets")->required();
  simulate_cmd->add_option("--seed", sim_seed, "master seed");
  simulate_cmd->add_option("--out", out_path, "output CSV file ('-' for stdout)");
  simulate_cmd->add_flag("--no-sweep", sim_no_sweep, "structured-only decoding for new codes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (params_cmd->parsed()) return run_params(N, B, T, q);
    if (encode_cmd->parsed()) return run_encode(N, B, T, q, message);
    if (decode_cmd->parsed()) return run_decode(N, B, T, q, received, no_sweep);
    if (capability_cmd->parsed()) return run_capability(N, B, T, q, with_sw, max_patterns);
    if (oracle_cmd->parsed()) {
      if (!exhaustive && samples < 0) {
        throw UsageError("pass --exhaustive or --samples S");
      }
      return run_oracle_diff(N, B, T, q, exhaustive, samples, oracle_seed, force);
    }
    if (simulate_cmd->parsed()) {
      return run_simulate(codes, alpha, beta, eps0_list, eps1, len, sim_seed, out_path,
                          sim_no_sweep);
    }
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {  // usage, parameter, capacity
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "gtest/gtest.h"

#include <random>

#include "streamfec/channel.hpp"
#include "streamfec/decoder.hpp"

using namespace std;
using namespace streamfec;

namespace {

ErasurePattern mask_of(int n, const vector<int>& positions)  // 1-based positions
{
  ErasurePattern mask(n, 0);
  for (int pos : positions) mask[pos - 1] = 1;
  return mask;
}

}  // namespace

TEST(test_decoder, deadline_examples)
{
  const CodeParams big = derive_params(4, 7, 15);
  EXPECT_EQ(deadline(1, big), 16);
  EXPECT_EQ(deadline(big.n, big), big.n);
  const CodeParams small = derive_params(1, 2, 4, 5u);
  EXPECT_EQ(deadline(2, small), 6);
  EXPECT_THROW(deadline(0, small), UsageError);
  EXPECT_THROW(deadline(small.n + 1, small), UsageError);
}

TEST(test_decoder, oracle_trivial_cases)
{
  const CodeParams p = derive_params(1, 2, 4, 5u);
  const GeneratorMatrix G(p);
  const ErasurePattern none(p.n, 0);
  const ErasurePattern all(p.n, 1);
  for (int i = 1; i <= p.k; ++i) {
    EXPECT_TRUE(oracle_recoverable(none, i, G));
    EXPECT_FALSE(oracle_recoverable(all, i, G));
  }
}

TEST(test_decoder, oracle_worked_example)
{
  const CodeParams p = derive_params(1, 2, 4, 5u);
  const GeneratorMatrix G(p);
  const ErasurePattern mask = mask_of(p.n, {1, 3});
  // within deadline(1)=5 the columns at x2, x4, x5 span e1 (2x2 system with
  // determinant -1 in GF(5))
  EXPECT_TRUE(oracle_recoverable(mask, 1, G));
  EXPECT_TRUE(oracle_recoverable(mask, 3, G));
  EXPECT_TRUE(oracle_recoverable(mask, 2, G));
}

TEST(test_decoder, decode_clean_word_is_all_received)
{
  const GeneratorMatrix G(derive_params(1, 2, 4, 5u));
  const Codeword x = encode({1, 2, 3}, G);
  const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, ErasurePattern(6, 0)), G);
  for (const auto& o : out.info) {
    EXPECT_EQ(o.status, SymbolStatus::Received);
    EXPECT_EQ(o.delay, 0);
  }
  EXPECT_EQ(out.phase2_load, 0);
}

TEST(test_decoder, decode_burst_hits_urgent_then_terminates_via_rs)
{
  // erase {x1, x2}: u1 comes back through its interleaved check with delay
  // T=4; that recovery leaves a single gap in the punctured block, so the
  // shortcut settles u2 from p1 one position earlier
  const GeneratorMatrix G(derive_params(1, 2, 4, 5u));
  const Codeword x = encode({1, 2, 3}, G);
  EXPECT_EQ(x, (Codeword{1, 2, 3, 4, 4, 2}));
  const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask_of(6, {1, 2})), G);
  EXPECT_EQ(out.info[0].status, SymbolStatus::Recovered);
  EXPECT_EQ(out.info[0].phase, RecoveryPhase::Urgent);
  EXPECT_EQ(out.info[0].delay, 4);
  EXPECT_EQ(out.info[0].value, 1u);
  EXPECT_EQ(out.info[1].status, SymbolStatus::Recovered);
  EXPECT_EQ(out.info[1].phase, RecoveryPhase::RsShortcut);
  EXPECT_EQ(out.info[1].delay, 3);
  EXPECT_EQ(out.info[1].value, 2u);
  EXPECT_EQ(out.info[2].status, SymbolStatus::Received);
  EXPECT_EQ(out.phase2_load, 0);
}

TEST(test_decoder, decode_scattered_pair_resolved_by_sweep)
{
  // erase {x1, x3}: the check over {u1, u3} has two gaps and only one RS
  // parity exists, so the structured phases stall; the prefix systems at the
  // deadlines settle both
  const GeneratorMatrix G(derive_params(1, 2, 4, 5u));
  const Codeword x = encode({1, 2, 3}, G);
  const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask_of(6, {1, 3})), G);
  EXPECT_EQ(out.info[0].status, SymbolStatus::Recovered);
  EXPECT_EQ(out.info[0].phase, RecoveryPhase::Sweep);
  EXPECT_EQ(out.info[0].delay, 4);
  EXPECT_EQ(out.info[0].value, 1u);
  EXPECT_EQ(out.info[2].status, SymbolStatus::Recovered);
  EXPECT_EQ(out.info[2].phase, RecoveryPhase::Sweep);
  EXPECT_EQ(out.info[2].delay, 2);
  EXPECT_EQ(out.info[2].value, 3u);
  EXPECT_EQ(out.info[1].status, SymbolStatus::Received);
  EXPECT_EQ(out.phase2_load, 2);
}

TEST(test_decoder, decode_without_sweep_reports_losses)
{
  const GeneratorMatrix G(derive_params(1, 2, 4, 5u));
  const Codeword x = encode({1, 2, 3}, G);
  const DecodeOutcome out =
      decode(ReceivedWord::from_codeword(x, mask_of(6, {1, 3})), G, {.enable_sweep = false});
  EXPECT_EQ(out.info[0].status, SymbolStatus::Lost);
  EXPECT_EQ(out.info[2].status, SymbolStatus::Lost);
  EXPECT_EQ(out.phase2_load, 2);
}

TEST(test_decoder, decode_burst_plus_arbitrary_delays)
{
  // (N=2, B=4, T=10) over GF(11), burst over u2..u5 plus an arbitrary hit on
  // u8: urgent checks give u2, u3 at delay 10, phase 1 gives u5 at delay 6,
  // and the RS parities give u4, u8 at delays 9 and 5 (the phase-2 solve
  // reads the check-recovered inputs, so availability chains through them)
  const CodeParams p = derive_params(2, 4, 10, 11u);
  const GeneratorMatrix G(p);
  const Message u{1, 2, 3, 4, 5, 6, 7, 8};
  const Codeword x = encode(u, G);
  const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask_of(p.n, {2, 3, 4, 5, 8})), G);
  EXPECT_EQ(out.info[1].phase, RecoveryPhase::Urgent);
  EXPECT_EQ(out.info[1].delay, 10);
  EXPECT_EQ(out.info[2].phase, RecoveryPhase::Urgent);
  EXPECT_EQ(out.info[2].delay, 10);
  EXPECT_EQ(out.info[4].phase, RecoveryPhase::Phase1);
  EXPECT_EQ(out.info[4].delay, 6);
  EXPECT_EQ(out.info[3].phase, RecoveryPhase::Phase2);
  EXPECT_EQ(out.info[3].delay, 9);
  EXPECT_EQ(out.info[7].phase, RecoveryPhase::Phase2);
  EXPECT_EQ(out.info[7].delay, 5);
  EXPECT_EQ(out.phase2_load, 2);
  for (int i = 0; i < p.k; ++i) {
    ASSERT_NE(out.info[i].status, SymbolStatus::Lost);
    EXPECT_EQ(out.info[i].value, u[i]);
  }
}

TEST(test_decoder, decode_lost_is_final)
{
  // burst over u1..u4 plus arbitrary hits on u5 and the first check: u1
  // cannot be settled by position 11 and stays lost even though the full
  // block determines it; u5 comes back at delay 9
  const CodeParams p = derive_params(2, 4, 10, 11u);
  const GeneratorMatrix G(p);
  const Message u{1, 2, 3, 4, 5, 6, 7, 8};
  const Codeword x = encode(u, G);
  const DecodeOutcome out =
      decode(ReceivedWord::from_codeword(x, mask_of(p.n, {1, 2, 3, 4, 5, 11})), G);
  EXPECT_EQ(out.info[0].status, SymbolStatus::Lost);
  EXPECT_FALSE(oracle_recoverable(mask_of(p.n, {1, 2, 3, 4, 5, 11}), 1, G));
  EXPECT_EQ(out.info[1].delay, 10);
  EXPECT_EQ(out.info[2].delay, 10);
  EXPECT_EQ(out.info[3].delay, 10);
  EXPECT_EQ(out.info[4].phase, RecoveryPhase::Phase2);
  EXPECT_EQ(out.info[4].delay, 9);
  EXPECT_EQ(out.info[4].value, 5u);
  EXPECT_EQ(out.phase2_load, 2);
}

TEST(test_decoder, rs_shortcut_delay_below_T)
{
  const CodeParams p = derive_params(2, 4, 10, 11u);
  const GeneratorMatrix G(p);
  const Message u{3, 1, 4, 1, 5, 9, 2, 6};
  const Codeword x = encode(u, G);
  const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask_of(p.n, {1, 9})), G);
  EXPECT_EQ(out.info[0].status, SymbolStatus::Recovered);
  EXPECT_EQ(out.info[0].phase, RecoveryPhase::RsShortcut);
  EXPECT_EQ(out.info[0].delay, 9);
  EXPECT_LT(out.info[0].delay, p.T);
  EXPECT_EQ(out.info[0].value, 3u);
}

TEST(test_decoder, all_short_bursts_recovered_small_code)
{
  // r=1 instance: every burst of length <= N+r = 2 anywhere in the codeword
  const CodeParams p = derive_params(1, 2, 4, 5u);
  const GeneratorMatrix G(p);
  const Codeword x = encode({1, 2, 3}, G);
  for (int burst = 1; burst <= 2; ++burst) {
    for (const auto& mask : enumerate_bursts(burst, p.n)) {
      const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask), G);
      EXPECT_TRUE(out.fully_recovered());
      for (const auto& o : out.info) {
        if (o.status == SymbolStatus::Recovered) {
          EXPECT_LE(o.delay, p.T);
        }
      }
    }
  }
}

TEST(test_decoder, exhaustive_completeness_smallest_code)
{
  const CodeParams p = derive_params(1, 2, 4, 5u);
  const GeneratorMatrix G(p);
  const Message u{1, 4, 2};
  const Codeword x = encode(u, G);
  for (uint64_t bits = 0; bits < (1ull << p.n); ++bits) {
    const ErasurePattern mask = pattern_from_bits(bits, p.n);
    const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask), G);
    for (int i = 1; i <= p.k; ++i) {
      const bool decoded = out.info[i - 1].status != SymbolStatus::Lost;
      EXPECT_EQ(decoded, oracle_recoverable(mask, i, G)) << "bits=" << bits << " i=" << i;
      if (decoded) {
        EXPECT_EQ(out.info[i - 1].value, u[i - 1]);
        EXPECT_LE(out.info[i - 1].delay, p.T);
        EXPECT_GE(out.info[i - 1].delay, 0);
      }
    }
  }
}

TEST(test_decoder, degenerate_families_match_oracle)
{
  // B = 0 is a bare RS code, N = 0 a bare interleaved code; both must still
  // realize exactly the recoverable set
  for (const CodeParams& p : {derive_params(2, 0, 5), derive_params(0, 2, 4)}) {
    const GeneratorMatrix G(p);
    Message u(p.k);
    for (int i = 0; i < p.k; ++i) u[i] = (2 * i + 1) % p.q;
    const Codeword x = encode(u, G);
    for (uint64_t bits = 0; bits < (1ull << p.n); ++bits) {
      const ErasurePattern mask = pattern_from_bits(bits, p.n);
      const DecodeOutcome out = decode(ReceivedWord::from_codeword(x, mask), G);
      for (int i = 1; i <= p.k; ++i) {
        const bool decoded = out.info[i - 1].status != SymbolStatus::Lost;
        EXPECT_EQ(decoded, oracle_recoverable(mask, i, G));
        if (decoded) {
          EXPECT_EQ(out.info[i - 1].value, u[i - 1]);
          EXPECT_LE(out.info[i - 1].delay, p.T);
        }
      }
    }
  }
}

TEST(test_decoder, punctured_rs_solve_examples)
{
  const CodeParams p = derive_params(2, 4, 10, 11u);
  const GeneratorMatrix G(p);
  const Message u{10, 9, 8, 7, 6, 5, 4, 3};
  const Codeword x = encode(u, G);

  EXPECT_TRUE(punctured_rs_solve(ReceivedWord::from_codeword(x, ErasurePattern(p.n, 0)), G, {})
                  .empty());

  // every pair of erasures among the first k+N positions solves exactly
  for (int a = 1; a <= p.k + p.N; ++a) {
    for (int b = a + 1; b <= p.k + p.N; ++b) {
      const auto got =
          punctured_rs_solve(ReceivedWord::from_codeword(x, mask_of(p.n, {a, b})), G, {a, b});
      ASSERT_EQ(got.size(), 2u);
      EXPECT_EQ(got[0].second, x[a - 1]);
      EXPECT_EQ(got[1].second, x[b - 1]);
    }
  }

  const auto single =
      punctured_rs_solve(ReceivedWord::from_codeword(x, mask_of(p.n, {4})), G, {4});
  EXPECT_EQ(single[0].second, u[3]);
}

TEST(test_decoder, punctured_rs_solve_contract_errors)
{
  const CodeParams p = derive_params(2, 4, 10, 11u);
  const GeneratorMatrix G(p);
  const Codeword x = encode({1, 2, 3, 4, 5, 6, 7, 8}, G);
  EXPECT_THROW(
      punctured_rs_solve(ReceivedWord::from_codeword(x, mask_of(p.n, {1, 2, 3})), G, {1, 2, 3}),
      CapacityError);
  EXPECT_THROW(punctured_rs_solve(ReceivedWord::from_codeword(x, ErasurePattern(p.n, 0)), G, {1}),
               UsageError);  // listed unknown is not erased
  EXPECT_THROW(punctured_rs_solve(ReceivedWord::from_codeword(x, mask_of(p.n, {1, 2})), G, {1}),
               UsageError);  // erased punctured position not listed
  EXPECT_THROW(
      punctured_rs_solve(ReceivedWord::from_codeword(x, mask_of(p.n, {11})), G, {11}),
      UsageError);  // beyond the punctured block
}

TEST(test_decoder, inconsistent_received_word_raises_integrity_error)
{
  const GeneratorMatrix G(derive_params(1, 2, 4, 5u));
  Codeword x = encode({1, 2, 3}, G);
  x[5] = G.field().add(x[5], 1);  // corrupt an interleaved check
  EXPECT_THROW(decode(ReceivedWord::from_codeword(x, ErasurePattern(6, 0)), G), IntegrityError);

  Codeword y = encode({1, 2, 3}, G);
  y[3] = G.field().add(y[3], 2);  // corrupt the RS parity
  EXPECT_THROW(decode(ReceivedWord::from_codeword(y, ErasurePattern(6, 0)), G), IntegrityError);
}

TEST(test_decoder, decode_validates_input)
{
  const GeneratorMatrix G(derive_params(1, 2, 4, 5u));
  ReceivedWord y;
  y.symbols = {1, 2, 3, 4, 4};
  y.erased = {0, 0, 0, 0, 0};
  EXPECT_THROW(decode(y, G), UsageError);
  y.symbols = {1, 2, 3, 4, 4, 9};
  y.erased = {0, 0, 0, 0, 0, 0};
  EXPECT_THROW(decode(y, G), UsageError);
}

TEST(test_decoder, received_word_text_forms)
{
  const ReceivedWord y = ReceivedWord::parse("1,2,?,?,4,2");
  EXPECT_EQ(y.symbols.size(), 6u);
  EXPECT_EQ(y.erased, (vector<uint8_t>{0, 0, 1, 1, 0, 0}));
  EXPECT_EQ(y.symbols[0], 1u);
  EXPECT_EQ(y.str(), "1,2,?,?,4,2");
  EXPECT_THROW(ReceivedWord::parse("1,x,3"), UsageError);
}

int main(int argc, char* argv[])
{
  testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gencoll/protocol.hpp"
#include "oracles.hpp"

using namespace gencoll;

namespace {

Grid<std::uint8_t> grid(const std::vector<std::string>& rows) {
  Grid<std::uint8_t> g(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) g(r, c) = static_cast<std::uint8_t>(rows[r][c] - '0');
  return g;
}

DutyFactorSpec spec(std::vector<std::uint64_t> nums, std::uint64_t q) { return {std::move(nums), q}; }

const std::vector<std::string> kA32 = {"10101010", "11001100", "11110000"};

}  // namespace

TEST(RadixMatrix, ThreeLinkDisplay) {
  EXPECT_EQ(construct_radix_matrix(3, 2).digits, grid(kA32));
}

TEST(RadixMatrix, SingleRowCountsDown) {
  for (unsigned q : {2u, 3u, 7u}) {
    const auto a = construct_radix_matrix(1, q);
    ASSERT_EQ(a.period(), q);
    for (unsigned t = 0; t < q; ++t) EXPECT_EQ(a.digits(0, t), q - 1 - t);
  }
}

TEST(RadixMatrix, MatchesBaseConversion) {
  for (auto [m, q] : {std::pair{2u, 3u}, {3u, 3u}, {4u, 2u}, {2u, 5u}}) {
    const auto a = construct_radix_matrix(m, q);
    const std::uint64_t period = a.period();
    for (std::uint64_t col = 1; col <= period; ++col) {
      const auto d = oracle::base_digits(period - col, q, m);
      for (std::size_t r = 0; r < m; ++r) EXPECT_EQ(a.digits(r, col - 1), d[r]);
    }
  }
}

TEST(RadixMatrix, EveryTupleOnce) {
  for (auto [m, q] : {std::pair{1u, 4u}, {2u, 2u}, {2u, 3u}, {3u, 3u}, {4u, 3u}, {5u, 2u}}) {
    const auto a = construct_radix_matrix(m, q);
    std::set<std::vector<std::uint8_t>> cols;
    for (std::size_t t = 0; t < a.period(); ++t) {
      std::vector<std::uint8_t> c;
      for (std::size_t r = 0; r < m; ++r) c.push_back(a.digits(r, t));
      cols.insert(c);
    }
    EXPECT_EQ(cols.size(), a.period());
  }
}

TEST(RadixMatrix, SizeBound) {
  EXPECT_THROW(construct_radix_matrix(8, 10), BoundError);
  EXPECT_NO_THROW(construct_radix_matrix(8, 10, SizeLimits{1'000'000'000}));
  EXPECT_THROW(construct_radix_matrix(0, 2), DomainError);
  EXPECT_THROW(construct_radix_matrix(2, 1), DomainError);
}

TEST(ProtocolMatrix, BinaryRadixIsItsOwnProtocol) {
  const auto s = construct_protocol_matrix(spec({1, 1, 1}, 2));
  EXPECT_EQ(s.bits(), grid(kA32));
  EXPECT_EQ(s.period(), 8u);
}

TEST(ProtocolMatrix, ZeroAndFullDuty) {
  const auto s = construct_protocol_matrix(spec({0, 3, 1}, 3));
  for (std::size_t t = 0; t < s.period(); ++t) {
    EXPECT_EQ(s(0, t), 0);
    EXPECT_EQ(s(1, t), 1);
  }
  EXPECT_EQ(duty_factor(s.row(2)), Rational(1, 3));
}

TEST(ProtocolMatrix, RowCountsProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::uint64_t q = 1 + rng() % 4;
    DutyFactorSpec sp{{}, q};
    for (std::size_t i = 0; i < m; ++i) sp.numerators.push_back(rng() % (q + 1));
    const auto s = construct_protocol_matrix(sp);
    ASSERT_EQ(s.period(), detail::saturating_pow(q, m));
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t ones = 0;
      for (auto v : s.row(i)) ones += v;
      EXPECT_EQ(ones, sp.numerators[i] * detail::saturating_pow(q, m - 1));
      EXPECT_EQ(duty_factor(s.row(i)), Rational(sp.numerators[i], q));
    }
  }
}

TEST(ProtocolMatrix, RejectsBadSpecs) {
  EXPECT_THROW(construct_protocol_matrix(spec({1, 3}, 2)), DomainError);
  EXPECT_THROW(construct_protocol_matrix(spec({}, 2)), DomainError);
  EXPECT_THROW(construct_protocol_matrix(spec({1, 1}, 0)), DomainError);
  EXPECT_THROW(construct_protocol_matrix(spec(std::vector<std::uint64_t>(9, 1), 10)), BoundError);
}

TEST(DutyFactor, Examples) {
  const std::vector<std::uint8_t> half{1, 1, 0, 0}, none{0, 0, 0};
  EXPECT_EQ(duty_factor(half), Rational(1, 2));
  EXPECT_EQ(duty_factor(none), Rational(0));
  const auto s = construct_protocol_matrix(spec({1, 1, 1}, 2));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(duty_factor(s.row(i)), Rational(1, 2));
  EXPECT_THROW(duty_factor(std::span<const std::uint8_t>{}), DomainError);
}

TEST(ObservedSubmatrix, ShiftedRows) {
  const ProtocolMatrix a(grid({"1010", "1100", "0101"}));
  const auto g = parse_profile("M 3\nI 1: 2\nI 2: 3\n");
  ASSERT_EQ(g.index_set(1), (std::vector<std::size_t>{1, 2}));
  auto d = OffsetAssignment::zeros(g);
  d.set(1, 1, 1);
  d.set(1, 2, 3);
  EXPECT_EQ(observed_submatrix(a, g, 1, d), grid({"0110", "1010"}));
}

TEST(ObservedSubmatrix, ThreeLinkReceiver1) {
  const auto s = construct_protocol_matrix(spec({1, 1, 1}, 2));
  const auto g = oracle::three_link_graph();
  auto d = OffsetAssignment::zeros(g);
  d.set(0, 0, 1);
  d.set(0, 1, 2);
  d.set(0, 2, 3);
  EXPECT_EQ(observed_submatrix(s, g, 0, d), grid({"01010101", "00110011", "00011110"}));
}

TEST(ObservedSubmatrix, ZeroOffsetsAndPeriodicity) {
  const auto s = construct_protocol_matrix(spec({1, 2, 1}, 3));
  const auto g = oracle::three_link_graph();
  const auto zero = OffsetAssignment::zeros(g);
  const auto sub = observed_submatrix(s, g, 1, zero);
  for (std::size_t t = 0; t < s.period(); ++t) {
    EXPECT_EQ(sub(0, t), s(0, t));
    EXPECT_EQ(sub(1, t), s(1, t));
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = OffsetAssignment::zeros(g);
    for (const auto& [key, _] : zero.values()) d.set(key.first, key.second, Rational(long(rng() % 60) - 30));
    auto shifted = d;
    for (const auto& [key, v] : d.values())
      shifted.set(key.first, key.second, v + Rational(long(s.period()) * (long(rng() % 5) - 2)));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(observed_submatrix(s, g, i, d), observed_submatrix(s, g, i, shifted));
  }
}

TEST(ObservedSubmatrix, RejectsFractionalOffsets) {
  const auto s = construct_protocol_matrix(spec({1, 1, 1}, 2));
  const auto g = oracle::three_link_graph();
  auto d = OffsetAssignment::zeros(g);
  d.set(0, 1, Rational(1, 2));
  EXPECT_THROW(observed_submatrix(s, g, 0, d), DomainError);
  EXPECT_THROW(d.set(1, 2, 0), DomainError);  // 3 is not audible at receiver 2
}

TEST(KExpand, Substitution) {
  const ProtocolMatrix s(grid({"10"}));
  EXPECT_EQ(k_expand(s, 3).bits(), grid({"110000"}));
  const auto s32 = construct_protocol_matrix(spec({1, 1, 1}, 2));
  const auto e = k_expand(s32, 2);
  EXPECT_EQ(e.period(), 16u);
  EXPECT_EQ(std::vector<std::uint8_t>(e.row(2).begin(), e.row(2).end()),
            (std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(e.expansion(), 2u);
  EXPECT_THROW(k_expand(s, 1), DomainError);
  EXPECT_THROW(k_expand(s, 0), DomainError);
}

TEST(KExpand, DutyFactorScalesExactly) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_matrix(rng, 1 + rng() % 4, 1 + rng() % 9);
    for (unsigned k : {2u, 3u, 4u}) {
      const auto e = k_expand(s, k);
      for (std::size_t i = 0; i < s.num_links(); ++i)
        EXPECT_EQ(duty_factor(e.row(i)), duty_factor(s.row(i)) * Rational(k - 1, k));
    }
  }
}

TEST(ShiftInvariance, PassesOnConstructedMatrices) {
  EXPECT_TRUE(verify_shift_invariance(3, 2, oracle::three_link_graph()).passed);
  EXPECT_TRUE(verify_shift_invariance(2, 3, multiple_access_profile(2)).passed);
  ShiftInvarianceOptions full;
  full.full_sweep = true;
  const auto r = verify_shift_invariance(3, 2, oracle::three_link_graph(), full);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.offsets_examined, 8u * 8 * 8 + 8 * 8 + 8 * 8);
}

TEST(ShiftInvariance, LoneReceiver) {
  // receiver 1 hears only itself: J(1) = {1}
  const auto g = parse_profile("M 2\nI 2: 1\n");
  const auto r = verify_shift_invariance(2, 3, g);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.offsets_examined, 1u + 9u);
}

TEST(ShiftInvariance, DetectsNonInvariantMatrix) {
  // Columns are all 2-tuples, but shifting row 2 by one slot repeats (1,0).
  RadixMatrix bad{grid({"1100", "0110"}), 2};
  const auto r = verify_shift_invariance(bad, multiple_access_profile(2));
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_NE(r.counterexample->count, r.counterexample->expected);
}

TEST(ShiftInvariance, BoundExceeded) {
  ShiftInvarianceOptions tight;
  tight.max_space = 10;
  EXPECT_THROW(verify_shift_invariance(3, 2, oracle::three_link_graph(), tight), BoundError);
}

TEST(MatrixFile, RoundTripAndErrors) {
  const auto s = construct_protocol_matrix(spec({1, 2, 0}, 3));
  EXPECT_EQ(parse_matrix(format_matrix(s)), s);
  EXPECT_EQ(format_matrix(ProtocolMatrix(grid({"10", "01"}))), "2 2\n10\n01\n");
  const auto a = construct_radix_matrix(2, 3);
  EXPECT_EQ(format_radix_matrix(a).substr(0, 6), "2 9 3\n");
  EXPECT_EQ(parse_radix_matrix(format_radix_matrix(a)).digits, a.digits);
  EXPECT_THROW(parse_matrix("2 3\n101\n"), ParseError);
  EXPECT_THROW(parse_matrix("2 3\n101\n1021\n"), ParseError);
  EXPECT_THROW(parse_matrix("2 3\n101\n121\n"), ParseError);
  EXPECT_THROW(parse_matrix("1 2\n10\n11\n"), ParseError);
  EXPECT_THROW(parse_matrix(""), ParseError);
}

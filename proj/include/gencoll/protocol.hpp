#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gencoll/collision_graph.hpp"
#include "gencoll/enumerate.hpp"
#include "gencoll/error.hpp"
#include "gencoll/grid.hpp"
#include "gencoll/offsets.hpp"
#include "gencoll/rational.hpp"

namespace gencoll {

struct SizeLimits {
  // Refuse constructions with more than this many matrix entries (q^M * M).
  std::uint64_t max_entries = 10'000'000;
};

// Rational duty factors f_i = numerators[i] / denominator.
struct DutyFactorSpec {
  std::vector<std::uint64_t> numerators;
  std::uint64_t denominator = 1;

  void validate() const {
    if (numerators.empty()) throw DomainError("duty factor spec needs at least one link");
    if (denominator < 1) throw DomainError("duty factor denominator must be positive");
    for (std::size_t i = 0; i < numerators.size(); ++i)
      if (numerators[i] > denominator)
        throw DomainError("duty numerator q_" + std::to_string(i + 1) + " = " + std::to_string(numerators[i]) +
                          " exceeds q = " + std::to_string(denominator));
  }

  std::vector<Rational> duty_factors() const {
    std::vector<Rational> f;
    f.reserve(numerators.size());
    for (auto n : numerators) f.emplace_back(BigInt(n), BigInt(denominator));
    return f;
  }

  friend bool operator==(const DutyFactorSpec&, const DutyFactorSpec&) = default;
};

// M x q^M matrix of radix-q digits; column t holds q^M - 1 - t, least
// significant digit in row 0.
struct RadixMatrix {
  Grid<std::uint8_t> digits;
  unsigned radix = 2;

  std::size_t dimension() const noexcept { return digits.rows(); }
  std::size_t period() const noexcept { return digits.cols(); }
};

// Binary protocol matrix: row i is link i's periodic transmission schedule.
class ProtocolMatrix {
 public:
  ProtocolMatrix() = default;

  explicit ProtocolMatrix(Grid<std::uint8_t> bits, std::optional<DutyFactorSpec> spec = std::nullopt,
                          unsigned expansion = 1)
      : bits_(std::move(bits)), spec_(std::move(spec)), expansion_(expansion) {
    if (bits_.rows() == 0) throw DomainError("protocol matrix needs at least one row");
    if (bits_.cols() == 0) throw DomainError("protocol matrix period must be at least 1");
    for (std::size_t r = 0; r < bits_.rows(); ++r)
      for (auto v : bits_.row(r))
        if (v > 1) throw DomainError("protocol matrix entries must be 0 or 1");
  }

  std::size_t num_links() const noexcept { return bits_.rows(); }
  std::size_t period() const noexcept { return bits_.cols(); }
  std::uint8_t operator()(std::size_t link, std::size_t slot) const { return bits_(link, slot); }
  std::span<const std::uint8_t> row(std::size_t link) const { return bits_.row(link); }
  const Grid<std::uint8_t>& bits() const noexcept { return bits_; }

  // Construction parameters, when built from a duty factor spec.
  const std::optional<DutyFactorSpec>& spec() const noexcept { return spec_; }
  unsigned expansion() const noexcept { return expansion_; }

  friend bool operator==(const ProtocolMatrix& a, const ProtocolMatrix& b) { return a.bits_ == b.bits_; }

 private:
  Grid<std::uint8_t> bits_;
  std::optional<DutyFactorSpec> spec_;
  unsigned expansion_ = 1;
};

namespace detail {

inline std::uint64_t checked_period(std::size_t dimension, std::uint64_t radix, const SizeLimits& limits) {
  const std::uint64_t period = saturating_pow(radix, dimension);
  if (saturating_mul(period, dimension) > limits.max_entries)
    throw BoundError("q^M * M = " + std::to_string(radix) + "^" + std::to_string(dimension) + " * " +
                     std::to_string(dimension) + " exceeds the bound of " + std::to_string(limits.max_entries) +
                     " entries");
  return period;
}

}  // namespace detail

inline RadixMatrix construct_radix_matrix(std::size_t dimension, unsigned radix, const SizeLimits& limits = {}) {
  if (dimension < 1) throw DomainError("radix matrix dimension must be at least 1");
  if (radix < 2) throw DomainError("radix must be at least 2");
  if (radix > 256) throw DomainError("radix must be at most 256");
  const std::uint64_t period = detail::checked_period(dimension, radix, limits);
  RadixMatrix a{Grid<std::uint8_t>(dimension, period), radix};
  for (std::uint64_t t = 0; t < period; ++t) {
    std::uint64_t value = period - 1 - t;
    for (std::size_t r = 0; r < dimension; ++r) {
      a.digits(r, t) = static_cast<std::uint8_t>(value % radix);
      value /= radix;
    }
  }
  return a;
}

// Digits q-1 .. q-q_i of row i map to 1, everything else to 0.
inline ProtocolMatrix construct_protocol_matrix(const DutyFactorSpec& spec, const SizeLimits& limits = {}) {
  spec.validate();
  const std::size_t m = spec.numerators.size();
  if (spec.denominator == 1) {
    // q = 1 has a single digit; every duty factor is 0 or 1 and the period is 1.
    Grid<std::uint8_t> bits(m, 1);
    for (std::size_t i = 0; i < m; ++i) bits(i, 0) = static_cast<std::uint8_t>(spec.numerators[i]);
    return ProtocolMatrix(std::move(bits), spec);
  }
  const auto a = construct_radix_matrix(m, static_cast<unsigned>(spec.denominator), limits);
  Grid<std::uint8_t> bits(m, a.period());
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t threshold = spec.denominator - spec.numerators[i];
    for (std::size_t t = 0; t < a.period(); ++t) bits(i, t) = a.digits(i, t) >= threshold ? 1 : 0;
  }
  return ProtocolMatrix(std::move(bits), spec);
}

inline Rational duty_factor(std::span<const std::uint8_t> row) {
  if (row.empty()) throw DomainError("duty factor of an empty sequence");
  std::size_t ones = 0;
  for (auto v : row) ones += v != 0;
  return Rational(BigInt(ones), BigInt(row.size()));
}

inline std::vector<Rational> duty_factors(const ProtocolMatrix& s) {
  std::vector<Rational> f;
  f.reserve(s.num_links());
  for (std::size_t i = 0; i < s.num_links(); ++i) f.push_back(duty_factor(s.row(i)));
  return f;
}

// Value at column t of a row cyclically right-shifted by `shift`: row[(t - shift) mod L].
inline std::size_t shifted_index(std::size_t t, std::size_t shift, std::size_t period) {
  return (t + period - shift % period) % period;
}

inline std::size_t offset_residue(const Rational& offset, std::size_t period) {
  if (!is_integer(offset)) throw DomainError("integer offset required, got " + to_string(offset));
  BigInt r = numerator_of(offset) % BigInt(period);
  if (r < 0) r += period;
  return r.convert_to<std::size_t>();
}

// Rows J(i) of S as seen at receiver i under integer offsets.
inline Grid<std::uint8_t> observed_submatrix(const ProtocolMatrix& s, const CollisionGraph& g, std::size_t receiver,
                                             const OffsetAssignment& offsets) {
  if (s.num_links() != g.num_links())
    throw DomainError("protocol matrix has " + std::to_string(s.num_links()) + " rows but the profile has " +
                      std::to_string(g.num_links()) + " links");
  const auto js = g.index_set(receiver);
  const std::size_t period = s.period();
  Grid<std::uint8_t> out(js.size(), period);
  for (std::size_t r = 0; r < js.size(); ++r) {
    const std::size_t shift = offset_residue(offsets.at(receiver, js[r]), period);
    for (std::size_t t = 0; t < period; ++t) out(r, t) = s(js[r], shifted_index(t, shift, period));
  }
  return out;
}

// 0 -> 0^k, 1 -> 1^(k-1) 0.
inline ProtocolMatrix k_expand(const ProtocolMatrix& s, unsigned k) {
  if (k < 2) throw DomainError("expansion factor must be at least 2, got " + std::to_string(k));
  const std::size_t period = s.period();
  Grid<std::uint8_t> bits(s.num_links(), period * k, 0);
  for (std::size_t i = 0; i < s.num_links(); ++i)
    for (std::size_t t = 0; t < period; ++t)
      if (s(i, t))
        for (unsigned d = 0; d + 1 < k; ++d) bits(i, t * k + d) = 1;
  return ProtocolMatrix(std::move(bits), s.spec(), s.expansion() * k);
}

struct ShiftInvarianceOptions {
  // Sweep the receiver's own offset too instead of pinning it to 0.
  bool full_sweep = false;
  std::uint64_t max_space = 10'000'000;
  SizeLimits limits{};
};

struct ShiftInvarianceCounterexample {
  std::size_t receiver = 0;
  std::vector<std::size_t> offsets;  // aligned with index_set(receiver)
  std::vector<std::uint8_t> tuple;
  std::uint64_t count = 0;
  std::uint64_t expected = 0;
};

struct ShiftInvarianceReport {
  bool passed = true;
  std::uint64_t offsets_examined = 0;
  std::optional<ShiftInvarianceCounterexample> counterexample;
};

// Exhaustively checks that every shifted observation A^i[delta] of a digit
// matrix contains each |J(i)|-tuple exactly q^(M-|J(i)|) times.
inline ShiftInvarianceReport verify_shift_invariance(const RadixMatrix& a, const CollisionGraph& g,
                                                     const ShiftInvarianceOptions& options = {}) {
  const std::size_t dimension = a.dimension();
  const unsigned radix = a.radix;
  if (g.num_links() != dimension)
    throw DomainError("profile has " + std::to_string(g.num_links()) + " links, expected " +
                      std::to_string(dimension));
  const std::size_t period = a.period();
  const std::size_t pinned = options.full_sweep ? 0 : 1;

  std::uint64_t space = 0;
  for (std::size_t i = 0; i < dimension; ++i)
    space = detail::saturating_add(space, detail::saturating_pow(period, g.index_set(i).size() - pinned));
  if (space > options.max_space)
    throw BoundError("offset space of " + (space == detail::kSaturated ? std::string("> 2^64") : std::to_string(space)) +
                     " exceeds the bound of " + std::to_string(options.max_space));

  ShiftInvarianceReport report;
  for (std::size_t i = 0; i < dimension && report.passed; ++i) {
    const auto js = g.index_set(i);
    const std::size_t n = js.size();
    const std::uint64_t expected = period / detail::saturating_pow(radix, n);
    const std::size_t tuples = detail::saturating_pow(radix, n);
    std::size_t own = 0;
    while (js[own] != i) ++own;

    std::vector<std::uint64_t> histogram(tuples);
    std::vector<std::size_t> shifts(n, 0);
    detail::for_each_tuple(n - pinned, period, [&](const std::vector<std::size_t>& free) {
      for (std::size_t r = 0, f = 0; r < n; ++r) shifts[r] = (pinned && r == own) ? 0 : free[f++];
      std::fill(histogram.begin(), histogram.end(), 0);
      for (std::size_t t = 0; t < period; ++t) {
        std::size_t code = 0;
        for (std::size_t r = n; r-- > 0;) code = code * radix + a.digits(js[r], shifted_index(t, shifts[r], period));
        ++histogram[code];
      }
      ++report.offsets_examined;
      for (std::size_t code = 0; code < tuples; ++code) {
        if (histogram[code] != expected) {
          ShiftInvarianceCounterexample cx{i, shifts, {}, histogram[code], expected};
          for (std::size_t r = 0, c = code; r < n; ++r, c /= radix) cx.tuple.push_back(static_cast<std::uint8_t>(c % radix));
          report.passed = false;
          report.counterexample = std::move(cx);
          return false;
        }
      }
      return true;
    });
  }
  return report;
}

inline ShiftInvarianceReport verify_shift_invariance(std::size_t dimension, unsigned radix, const CollisionGraph& g,
                                                     const ShiftInvarianceOptions& options = {}) {
  return verify_shift_invariance(construct_radix_matrix(dimension, radix, options.limits), g, options);
}

// "M L" then M rows of L characters from {0,1}.
inline std::string format_matrix(const ProtocolMatrix& s) {
  std::ostringstream out;
  out << s.num_links() << ' ' << s.period() << '\n';
  for (std::size_t i = 0; i < s.num_links(); ++i) {
    for (auto v : s.row(i)) out << static_cast<char>('0' + v);
    out << '\n';
  }
  return out.str();
}

namespace detail {

inline char digit_char(unsigned d) { return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)); }

inline int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

inline Grid<std::uint8_t> parse_digit_rows(std::istringstream& in, std::size_t rows, std::size_t cols, unsigned radix,
                                           std::size_t& line_no) {
  Grid<std::uint8_t> grid(rows, cols);
  std::string line;
  std::size_t r = 0;
  while (r < rows && std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.size() != cols)
      throw ParseError(line_no, "row " + std::to_string(r + 1) + " has " + std::to_string(t.size()) +
                                    " entries, expected " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      const int v = digit_value(t[c]);
      if (v < 0 || static_cast<unsigned>(v) >= radix)
        throw ParseError(line_no, std::string("invalid entry '") + t[c] + "'");
      grid(r, c) = static_cast<std::uint8_t>(v);
    }
    ++r;
  }
  if (r < rows) throw ParseError(line_no, "expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (!t.empty() && t.front() != '#') throw ParseError(line_no, "unexpected trailing content");
  }
  return grid;
}

inline std::vector<std::uint64_t> parse_header(std::istringstream& in, std::size_t fields, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream hs{std::string(t)};
    std::vector<std::uint64_t> out;
    std::string tok;
    while (hs >> tok) out.push_back(parse_positive_index(tok, line_no));
    if (out.size() != fields)
      throw ParseError(line_no, "header must have " + std::to_string(fields) + " integers");
    return out;
  }
  throw ParseError(0, "matrix file is empty");
}

}  // namespace detail

inline ProtocolMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  const auto header = detail::parse_header(in, 2, line_no);
  if (header[0] < 1 || header[1] < 1) throw ParseError(line_no, "M and L must be positive");
  return ProtocolMatrix(detail::parse_digit_rows(in, header[0], header[1], 2, line_no));
}

// "M L q" then M rows of L digits (0-9 then a-z for radix above 10).
inline std::string format_radix_matrix(const RadixMatrix& a) {
  std::ostringstream out;
  out << a.dimension() << ' ' << a.period() << ' ' << a.radix << '\n';
  for (std::size_t r = 0; r < a.dimension(); ++r) {
    for (auto v : a.digits.row(r)) out << detail::digit_char(v);
    out << '\n';
  }
  return out.str();
}

inline RadixMatrix parse_radix_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  const auto header = detail::parse_header(in, 3, line_no);
  if (header[0] < 1 || header[1] < 1) throw ParseError(line_no, "M and L must be positive");
  if (header[2] < 2 || header[2] > 36) throw ParseError(line_no, "radix must be in [2, 36]");
  const auto radix = static_cast<unsigned>(header[2]);
  return RadixMatrix{detail::parse_digit_rows(in, header[0], header[1], radix, line_no), radix};
}

}  // namespace gencoll

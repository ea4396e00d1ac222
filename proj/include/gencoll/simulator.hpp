#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "gencoll/collision_graph.hpp"
#include "gencoll/enumerate.hpp"
#include "gencoll/error.hpp"
#include "gencoll/offsets.hpp"
#include "gencoll/protocol.hpp"
#include "gencoll/rational.hpp"

namespace gencoll {

// Successful packets per slot for each link.
using ThroughputVector = std::vector<Rational>;

struct SweepOptions {
  // Upper bound on the number of per-receiver offset combinations examined.
  std::uint64_t max_space = 10'000'000;
  // Worker threads; results do not depend on this.
  unsigned jobs = 1;
};

struct SweepResult {
  ThroughputVector worst_case;
  ThroughputVector best_case;
  // witnesses[i] attains worst_case[i] at receiver i (other receivers' offsets are zero).
  std::vector<OffsetAssignment> witnesses;
  std::uint64_t offsets_examined = 0;
};

namespace detail {

// Fixed-length bit row backed by 64-bit words.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  BitRow& operator|=(const BitRow& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }

  void assign(const BitRow& o) { std::copy(o.words_.begin(), o.words_.end(), words_.begin()); }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  // popcount(this & ~blocked)
  std::size_t count_unblocked(const BitRow& blocked) const {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) n += std::popcount(words_[w] & ~blocked.words_[w]);
    return n;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Slots t in which an interferer packet overlaps link i's packet sent at slot t,
// for a relative offset with integer part d (mod L) that is aligned or not.
// Aligned: only the interferer packet at slot t - d. Misaligned: t - d and t - d - 1.
inline BitRow blocking_pattern(std::span<const std::uint8_t> interferer, std::size_t d, bool misaligned) {
  const std::size_t period = interferer.size();
  BitRow out(period);
  for (std::size_t t = 0; t < period; ++t) {
    bool hit = interferer[shifted_index(t, d, period)] != 0;
    if (misaligned) hit = hit || interferer[shifted_index(t, d + 1, period)] != 0;
    if (hit) out.set(t);
  }
  return out;
}

inline BitRow own_row(std::span<const std::uint8_t> row) {
  BitRow out(row.size());
  for (std::size_t t = 0; t < row.size(); ++t)
    if (row[t]) out.set(t);
  return out;
}

inline void check_shapes(const ProtocolMatrix& s, const CollisionGraph& g) {
  if (s.num_links() != g.num_links())
    throw DomainError("protocol matrix has " + std::to_string(s.num_links()) + " rows but the profile has " +
                      std::to_string(g.num_links()) + " links");
}

struct ReceiverStats {
  std::uint64_t min_count = kSaturated;
  std::uint64_t min_index = 0;
  std::uint64_t max_count = 0;
  std::uint64_t sum = 0;
  std::uint64_t combos = 0;

  void merge_after(const ReceiverStats& later) {
    if (later.combos == 0) return;
    if (later.min_count < min_count) {
      min_count = later.min_count;
      min_index = later.min_index;
    }
    max_count = std::max(max_count, later.max_count);
    sum += later.sum;
    combos += later.combos;
  }
};

// patterns[j][c]: blocking pattern of the j-th interferer under choice c.
inline ReceiverStats scan_range(const BitRow& own, const std::vector<std::vector<BitRow>>& patterns,
                                std::uint64_t begin, std::uint64_t end) {
  ReceiverStats stats;
  if (begin >= end) return stats;
  const std::size_t n = patterns.size();
  std::vector<std::size_t> choice(n, 0);
  std::uint64_t rest = begin;
  for (std::size_t k = 0; k < n; ++k) {
    choice[k] = rest % patterns[k].size();
    rest /= patterns[k].size();
  }
  BitRow blocked = own;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    blocked.clear();
    for (std::size_t k = 0; k < n; ++k) blocked |= patterns[k][choice[k]];
    const std::uint64_t count = own.count_unblocked(blocked);
    if (count < stats.min_count) {
      stats.min_count = count;
      stats.min_index = idx;
    }
    stats.max_count = std::max(stats.max_count, count);
    stats.sum += count;
    ++stats.combos;
    for (std::size_t k = 0; k < n && ++choice[k] == patterns[k].size(); ++k) choice[k] = 0;
  }
  return stats;
}

inline ReceiverStats scan_receiver(const BitRow& own, const std::vector<std::vector<BitRow>>& patterns, unsigned jobs) {
  std::uint64_t total = 1;
  for (const auto& p : patterns) total = saturating_mul(total, p.size());
  constexpr std::uint64_t kMinPerJob = 1024;
  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, total / kMinPerJob));
  if (workers == 1) return scan_range(own, patterns, 0, total);

  std::vector<ReceiverStats> parts(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t b = total * w / workers;
      const std::uint64_t e = total * (w + 1) / workers;
      pool.emplace_back([&, w, b, e] { parts[w] = scan_range(own, patterns, b, e); });
    }
  }
  ReceiverStats merged;
  for (const auto& p : parts) merged.merge_after(p);
  return merged;
}

enum class OffsetModel { synchronized, unsynchronized };

inline SweepResult sweep(const ProtocolMatrix& s, const CollisionGraph& g, OffsetModel model,
                         const SweepOptions& options) {
  check_shapes(s, g);
  const std::size_t period = s.period();
  const std::size_t choices = model == OffsetModel::synchronized ? period : 2 * period;
  std::uint64_t space = 0;
  for (std::size_t i = 0; i < g.num_links(); ++i)
    space = saturating_add(space, saturating_pow(choices, g.interferers(i).size()));
  if (space > options.max_space)
    throw BoundError("offset space of " + (space == kSaturated ? std::string("> 2^64") : std::to_string(space)) +
                     " exceeds the bound of " + std::to_string(options.max_space));

  SweepResult result;
  const unsigned jobs = std::max(1U, options.jobs);
  for (std::size_t i = 0; i < g.num_links(); ++i) {
    const auto inter = g.interferers(i);
    std::vector<std::vector<BitRow>> patterns(inter.size());
    for (std::size_t k = 0; k < inter.size(); ++k) {
      patterns[k].reserve(choices);
      for (std::size_t c = 0; c < choices; ++c) {
        if (model == OffsetModel::synchronized)
          patterns[k].push_back(blocking_pattern(s.row(inter[k]), c, false));
        else
          patterns[k].push_back(blocking_pattern(s.row(inter[k]), c / 2, c % 2 == 1));
      }
    }
    const auto stats = scan_receiver(own_row(s.row(i)), patterns, jobs);
    result.worst_case.emplace_back(BigInt(stats.min_count), BigInt(period));
    result.best_case.emplace_back(BigInt(stats.max_count), BigInt(period));
    result.offsets_examined += stats.combos;

    auto witness = OffsetAssignment::zeros(g);
    std::uint64_t rest = stats.min_index;
    for (std::size_t k = 0; k < inter.size(); ++k) {
      const std::size_t c = rest % choices;
      rest /= choices;
      Rational delta = model == OffsetModel::synchronized ? Rational(c) : Rational(c / 2);
      if (model == OffsetModel::unsynchronized && c % 2 == 1) delta += Rational(1, 2);
      witness.set(i, inter[k], delta);
    }
    result.witnesses.push_back(std::move(witness));
  }
  return result;
}

inline ThroughputVector evaluate(const ProtocolMatrix& s, const CollisionGraph& g, const OffsetAssignment& offsets,
                                 bool require_integer) {
  check_shapes(s, g);
  const std::size_t period = s.period();
  ThroughputVector out;
  out.reserve(g.num_links());
  for (std::size_t i = 0; i < g.num_links(); ++i) {
    const Rational& own_offset = offsets.at(i, i);
    if (require_integer && !is_integer(own_offset))
      throw DomainError("fractional offset (" + std::to_string(i + 1) + "," + std::to_string(i + 1) +
                        ") in synchronized evaluation");
    const BitRow own = own_row(s.row(i));
    BitRow blocked(period);
    for (std::size_t j : g.interferers(i)) {
      const Rational delta = offsets.at(i, j) - own_offset;
      if (require_integer && !is_integer(offsets.at(i, j)))
        throw DomainError("fractional offset (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") in synchronized evaluation");
      BigInt d = floor_of(delta) % BigInt(period);
      if (d < 0) d += period;
      blocked |= blocking_pattern(s.row(j), d.convert_to<std::size_t>(), !is_integer(delta));
    }
    out.emplace_back(BigInt(own.count_unblocked(blocked)), BigInt(period));
  }
  return out;
}

}  // namespace detail

// Per-link throughput under integer offsets: fraction of slots where link i's
// packet arrives while no interferer's does.
inline ThroughputVector sync_throughput(const ProtocolMatrix& s, const CollisionGraph& g,
                                        const OffsetAssignment& offsets) {
  return detail::evaluate(s, g, offsets, true);
}

// Per-link throughput under arbitrary rational offsets. Packets collide when
// their arrival times differ by strictly less than one slot.
inline ThroughputVector nonsync_throughput(const ProtocolMatrix& s, const CollisionGraph& g,
                                           const OffsetAssignment& offsets) {
  return detail::evaluate(s, g, offsets, false);
}

// Exact minimum over all integer offsets, receiver by receiver, with each
// receiver's own offset pinned to 0.
inline SweepResult sweep_sync_worstcase(const ProtocolMatrix& s, const CollisionGraph& g,
                                        const SweepOptions& options = {}) {
  return detail::sweep(s, g, detail::OffsetModel::synchronized, options);
}

// Exact minimum over all real offsets. Per interferer only the integer part of
// the relative offset mod L and whether it is fractional matter, giving 2L
// cases each.
inline SweepResult sweep_nonsync_worstcase(const ProtocolMatrix& s, const CollisionGraph& g,
                                           const SweepOptions& options = {}) {
  return detail::sweep(s, g, detail::OffsetModel::unsynchronized, options);
}

// Mean of sync throughput over all integer offset residues mod L.
inline ThroughputVector average_throughput_over_offsets(const ProtocolMatrix& s, const CollisionGraph& g,
                                                        const SweepOptions& options = {}) {
  detail::check_shapes(s, g);
  const std::size_t period = s.period();
  std::uint64_t space = 0;
  for (std::size_t i = 0; i < g.num_links(); ++i)
    space = detail::saturating_add(space, detail::saturating_pow(period, g.interferers(i).size()));
  if (space > options.max_space)
    throw BoundError("offset space of " + std::to_string(space) + " exceeds the bound of " +
                     std::to_string(options.max_space));
  ThroughputVector out;
  for (std::size_t i = 0; i < g.num_links(); ++i) {
    const auto inter = g.interferers(i);
    std::vector<std::vector<detail::BitRow>> patterns(inter.size());
    for (std::size_t k = 0; k < inter.size(); ++k)
      for (std::size_t d = 0; d < period; ++d)
        patterns[k].push_back(detail::blocking_pattern(s.row(inter[k]), d, false));
    const auto stats = detail::scan_receiver(detail::own_row(s.row(i)), patterns, std::max(1U, options.jobs));
    out.emplace_back(BigInt(stats.sum), BigInt(stats.combos) * period);
  }
  return out;
}

}  // namespace gencoll

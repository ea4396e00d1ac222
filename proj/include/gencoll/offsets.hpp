#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gencoll/collision_graph.hpp"
#include "gencoll/error.hpp"
#include "gencoll/rational.hpp"

namespace gencoll {

// Offset from transmitter j to receiver i for every j in J(i). Keys are exactly
// {(i, j) : j in J(i)}; values are exact rationals.
class OffsetAssignment {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  static OffsetAssignment zeros(const CollisionGraph& g) {
    OffsetAssignment a;
    for (std::size_t i = 0; i < g.num_links(); ++i)
      for (std::size_t j : g.index_set(i)) a.values_.emplace(Key{i, j}, Rational(0));
    return a;
  }

  // Every key of g must be present in `values`, and nothing else.
  static OffsetAssignment from_map(const CollisionGraph& g, std::map<Key, Rational> values) {
    OffsetAssignment a = zeros(g);
    for (const auto& [key, _] : values)
      if (!a.values_.contains(key))
        throw DomainError("offset (" + std::to_string(key.first + 1) + "," + std::to_string(key.second + 1) +
                          ") does not belong to the profile: link " + std::to_string(key.second + 1) +
                          " is not audible at receiver " + std::to_string(key.first + 1));
    for (const auto& [key, _] : a.values_)
      if (!values.contains(key))
        throw DomainError("missing offset (" + std::to_string(key.first + 1) + "," +
                          std::to_string(key.second + 1) + ")");
    a.values_ = std::move(values);
    return a;
  }

  const Rational& at(std::size_t receiver, std::size_t transmitter) const {
    auto it = values_.find({receiver, transmitter});
    if (it == values_.end())
      throw DomainError("missing offset (" + std::to_string(receiver + 1) + "," + std::to_string(transmitter + 1) +
                        ")");
    return it->second;
  }

  void set(std::size_t receiver, std::size_t transmitter, Rational value) {
    auto it = values_.find({receiver, transmitter});
    if (it == values_.end())
      throw DomainError("offset (" + std::to_string(receiver + 1) + "," + std::to_string(transmitter + 1) +
                        ") does not belong to the profile");
    it->second = std::move(value);
  }

  // True iff every offset is an integer.
  bool synchronized() const {
    for (const auto& [_, v] : values_)
      if (!is_integer(v)) return false;
    return true;
  }

  const std::map<Key, Rational>& values() const noexcept { return values_; }

  friend bool operator==(const OffsetAssignment&, const OffsetAssignment&) = default;

 private:
  OffsetAssignment() = default;
  std::map<Key, Rational> values_;
};

// Lines "<i> <j> <value>" (1-based), value an integer, decimal or p/q.
inline OffsetAssignment parse_offsets(std::string_view text, const CollisionGraph& g) {
  std::map<OffsetAssignment::Key, Rational> values;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string si, sj, sv, extra;
    if (!(fields >> si >> sj >> sv) || (fields >> extra))
      throw ParseError(line_no, "expected '<receiver> <transmitter> <offset>'");
    const std::size_t i = detail::parse_positive_index(si, line_no);
    const std::size_t j = detail::parse_positive_index(sj, line_no);
    if (i < 1 || i > g.num_links() || j < 1 || j > g.num_links())
      throw ParseError(line_no, "link index out of range [1, " + std::to_string(g.num_links()) + "]");
    Rational v;
    try {
      v = parse_rational(sv);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (!values.emplace(OffsetAssignment::Key{i - 1, j - 1}, v).second)
      throw ParseError(line_no, "duplicate offset (" + si + "," + sj + ")");
  }
  return OffsetAssignment::from_map(g, std::move(values));
}

inline std::string format_offsets(const OffsetAssignment& a) {
  std::ostringstream out;
  for (const auto& [key, v] : a.values()) {
    out << key.first + 1 << ' ' << key.second + 1 << ' ';
    if (is_integer(v))
      out << numerator_of(v).str();
    else
      out << to_string(v);
    out << '\n';
  }
  return out.str();
}

}  // namespace gencoll

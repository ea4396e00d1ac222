#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gencoll/error.hpp"
#include "gencoll/grid.hpp"

namespace gencoll {

struct GraphOptions {
  // Accept collision graphs whose underlying undirected graph has several components.
  bool allow_disconnected = false;
};

// Directed collision graph over links 0..M-1. interferers(i) lists the links
// whose packets can destroy link i's packets at receiver i.
class CollisionGraph {
 public:
  static CollisionGraph from_sets(std::size_t num_links, std::vector<std::vector<std::size_t>> sets,
                                  GraphOptions options = {}) {
    if (num_links == 0) throw DomainError("collision graph needs at least one link");
    if (sets.size() != num_links)
      throw DomainError("expected " + std::to_string(num_links) + " collision sets, got " +
                        std::to_string(sets.size()));
    for (std::size_t i = 0; i < num_links; ++i) {
      auto& s = sets[i];
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      for (std::size_t j : s) {
        if (j >= num_links)
          throw DomainError("link " + std::to_string(i + 1) + ": interferer index " + std::to_string(j + 1) +
                            " out of range [1, " + std::to_string(num_links) + "]");
        if (j == i) throw DomainError("link " + std::to_string(i + 1) + " declared in its own collision set");
      }
    }
    CollisionGraph g;
    g.sets_ = std::move(sets);
    g.check_isolated();
    g.connected_ = g.compute_weakly_connected();
    if (!g.connected_ && !options.allow_disconnected)
      throw DomainError("collision graph is not weakly connected (use allow_disconnected to analyze anyway)");
    return g;
  }

  std::size_t num_links() const noexcept { return sets_.size(); }

  std::span<const std::size_t> interferers(std::size_t i) const {
    check_index(i);
    return sets_[i];
  }

  // J(i): the interferers of i together with i itself, ascending.
  std::vector<std::size_t> index_set(std::size_t i) const {
    check_index(i);
    std::vector<std::size_t> out = sets_[i];
    out.insert(std::upper_bound(out.begin(), out.end(), i), i);
    return out;
  }

  bool interferes(std::size_t source, std::size_t victim) const {
    check_index(source);
    check_index(victim);
    return std::binary_search(sets_[victim].begin(), sets_[victim].end(), source);
  }

  // E(i,j) = 1 iff link i is in the collision set of link j.
  Grid<std::uint8_t> adjacency_matrix() const {
    const std::size_t m = num_links();
    Grid<std::uint8_t> e(m, m, 0);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i : sets_[j]) e(i, j) = 1;
    return e;
  }

  bool weakly_connected() const noexcept { return connected_; }

  friend bool operator==(const CollisionGraph& a, const CollisionGraph& b) { return a.sets_ == b.sets_; }

 private:
  CollisionGraph() = default;

  void check_index(std::size_t i) const {
    if (i >= sets_.size())
      throw DomainError("link index " + std::to_string(i + 1) + " out of range [1, " +
                        std::to_string(sets_.size()) + "]");
  }

  void check_isolated() const {
    const std::size_t m = num_links();
    std::vector<bool> touched(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      if (!sets_[i].empty()) touched[i] = true;
      for (std::size_t j : sets_[i]) touched[j] = true;
    }
    for (std::size_t i = 0; i < m; ++i)
      if (!touched[i]) throw DomainError("link " + std::to_string(i + 1) + " is an isolated vertex");
  }

  bool compute_weakly_connected() const {
    const std::size_t m = num_links();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j : sets_[i]) parent[find(i)] = find(j);
    const std::size_t root = find(0);
    for (std::size_t i = 1; i < m; ++i)
      if (find(i) != root) return false;
    return true;
  }

  std::vector<std::vector<std::size_t>> sets_;
  bool connected_ = true;
};

// Every link interferes with every other link (single shared receiver).
inline CollisionGraph multiple_access_profile(std::size_t num_links) {
  if (num_links < 2) throw DomainError("multiple-access profile needs at least 2 links");
  std::vector<std::vector<std::size_t>> sets(num_links);
  for (std::size_t i = 0; i < num_links; ++i)
    for (std::size_t j = 0; j < num_links; ++j)
      if (j != i) sets[i].push_back(j);
  return CollisionGraph::from_sets(num_links, std::move(sets));
}

// Two-hop line network: link i is hit by i-1, i+1, i+2, i+3, clipped to the chain.
inline CollisionGraph line_network_profile(std::size_t num_links) {
  if (num_links < 2) throw DomainError("line-network profile needs at least 2 links");
  std::vector<std::vector<std::size_t>> sets(num_links);
  for (std::size_t i = 0; i < num_links; ++i) {
    if (i >= 1) sets[i].push_back(i - 1);
    for (std::size_t d = 1; d <= 3; ++d)
      if (i + d < num_links) sets[i].push_back(i + d);
  }
  return CollisionGraph::from_sets(num_links, std::move(sets));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::size_t parse_positive_index(std::string_view tok, std::size_t line) {
  if (tok.empty()) throw ParseError(line, "expected an integer");
  std::size_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
    v = v * 10 + static_cast<std::size_t>(c - '0');
    if (v > 100'000'000) throw ParseError(line, "integer too large: '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

// Profile text: '#' comments and blank lines ignored; "M <int>" first, then
// "I <i>: <j1> <j2> ..." lines with 1-based indices. Repeated I lines for the
// same link are merged.
inline CollisionGraph parse_profile(std::string_view text, GraphOptions options = {}) {
  std::size_t num_links = 0;
  bool have_header = false;
  std::vector<std::vector<std::size_t>> sets;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!have_header) {
      if (line.front() != 'M' || line.size() < 2 || !std::isspace(static_cast<unsigned char>(line[1])))
        throw ParseError(line_no, "expected 'M <number of links>'");
      num_links = detail::parse_positive_index(detail::trim(line.substr(1)), line_no);
      if (num_links == 0) throw ParseError(line_no, "number of links must be positive");
      sets.assign(num_links, {});
      have_header = true;
      continue;
    }

    if (line.front() != 'I' || line.size() < 2 || !std::isspace(static_cast<unsigned char>(line[1])))
      throw ParseError(line_no, "expected 'I <link>: <interferers...>'");
    const auto body = line.substr(1);
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "missing ':' after link index");
    const std::size_t link = detail::parse_positive_index(detail::trim(body.substr(0, colon)), line_no);
    if (link < 1 || link > num_links)
      throw ParseError(line_no, "link index " + std::to_string(link) + " out of range [1, " +
                                    std::to_string(num_links) + "]");
    std::istringstream rest{std::string(body.substr(colon + 1))};
    std::string tok;
    while (rest >> tok) {
      const std::size_t j = detail::parse_positive_index(tok, line_no);
      if (j < 1 || j > num_links)
        throw ParseError(line_no, "interferer index " + std::to_string(j) + " out of range [1, " +
                                      std::to_string(num_links) + "]");
      if (j == link) throw ParseError(line_no, "self-collision: link " + std::to_string(link) + " in its own set");
      sets[link - 1].push_back(j - 1);
    }
  }
  if (!have_header) throw ParseError(0, "profile is empty (missing 'M <number of links>')");
  return CollisionGraph::from_sets(num_links, std::move(sets), options);
}

inline std::string format_profile(const CollisionGraph& g) {
  std::ostringstream out;
  out << "M " << g.num_links() << '\n';
  for (std::size_t i = 0; i < g.num_links(); ++i) {
    const auto inter = g.interferers(i);
    if (inter.empty()) continue;
    out << "I " << i + 1 << ':';
    for (std::size_t j : inter) out << ' ' << j + 1;
    out << '\n';
  }
  return out.str();
}

}  // namespace gencoll

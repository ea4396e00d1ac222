#pragma once

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gencoll/gencoll.hpp"

namespace gencoll::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultMaxSpace = 10'000'000;

using nlohmann::json;

// Numbers rounded to 12 significant digits; non-finite values become null.
inline json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline json residuals_json(const KktResiduals& r) {
  return {{"primal", number(r.primal)},
          {"box", number(r.box)},
          {"dual", number(r.dual)},
          {"slackness", number(r.slackness)},
          {"stationarity", number(r.stationarity)}};
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return "sha256:" + out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& tok : split_list(text)) out.push_back(parse_rational(tok));
  if (out.empty()) throw ParseError(0, "empty value list");
  return out;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

inline std::uint64_t default_max_space() {
  if (const char* env = std::getenv("GENCOLL_MAX_SPACE"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("GENCOLL_MAX_SPACE is not a number: '") + env + "'");
    }
  }
  return kDefaultMaxSpace;
}

struct Inputs {
  json digests = json::object();

  CollisionGraph profile(const std::string& path, bool allow_disconnected) {
    const auto text = read_file(path);
    digests["profile"] = sha256_hex(text);
    return parse_profile(text, GraphOptions{allow_disconnected});
  }

  ProtocolMatrix matrix(const std::string& path) {
    const auto text = read_file(path);
    digests["matrix"] = sha256_hex(text);
    return parse_matrix(text);
  }

  OffsetAssignment offsets(const std::string& path, const CollisionGraph& g) {
    const auto text = read_file(path);
    digests["offsets"] = sha256_hex(text);
    return parse_offsets(text, g);
  }
};

inline json offsets_json(const OffsetAssignment& a, std::size_t receiver) {
  json out = json::array();
  for (const auto& [key, v] : a.values())
    if (key.first == receiver) out.push_back({{"i", key.first + 1}, {"j", key.second + 1}, {"delta", to_string(v)}});
  return out;
}

inline json sweep_json(const SweepResult& r, const char* mode) {
  json witnesses = json::array();
  for (std::size_t i = 0; i < r.witnesses.size(); ++i)
    witnesses.push_back({{"link", i + 1}, {"offsets", offsets_json(r.witnesses[i], i)}});
  return {{"mode", mode},
          {"worst_case", rationals(r.worst_case)},
          {"best_case", rationals(r.best_case)},
          {"witnesses", witnesses},
          {"offsets_examined", r.offsets_examined}};
}

// Parses argv-style arguments (args[0] is the program name), writes the JSON
// report to `out`. Returns 0 on success, 1 on domain errors, 2 on usage errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Protocol sequences and reliable throughput regions for the generalized collision channel"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string profile_path, matrix_path, offsets_path, out_path, duty_text, mode = "auto";
  bool allow_disconnected = false;
  std::size_t links = 0;
  unsigned q = 0, expand = 0, jobs = std::max(1U, std::thread::hardware_concurrency());
  std::uint64_t max_entries = 10'000'000, max_space = 0;
  double tol = 1e-9;

  auto* construct = app.add_subcommand("construct", "build a shift-invariant protocol matrix");
  construct->add_option("--links", links, "number of links M")->required()->check(CLI::PositiveNumber);
  construct->add_option("--q", q, "common denominator q")->required()->check(CLI::PositiveNumber);
  construct->add_option("--duty", duty_text, "numerators q1,...,qM")->required();
  construct->add_option("--expand", expand, "expansion factor k >= 2 for unsynchronized operation");
  construct->add_option("--out", out_path, "matrix output file")->required();
  construct->add_option("--profile", profile_path, "profile for predicted throughput");
  construct->add_option("--max-entries", max_entries, "size bound on q^M * M");

  auto* simulate = app.add_subcommand("simulate", "exact per-link throughput at fixed offsets");
  simulate->add_option("--matrix", matrix_path)->required();
  simulate->add_option("--profile", profile_path)->required();
  simulate->add_option("--offsets", offsets_path)->required();
  simulate->add_option("--mode", mode)->check(CLI::IsMember({"auto", "sync", "nonsync"}));

  auto* sweep = app.add_subcommand("sweep", "exhaustive worst case over all offsets");
  sweep->add_option("--matrix", matrix_path)->required();
  sweep->add_option("--profile", profile_path)->required();
  sweep->add_option("--mode", mode)->check(CLI::IsMember({"sync", "nonsync"}));
  sweep->add_option("--max-space", max_space, "bound on offset combinations (default GENCOLL_MAX_SPACE or 1e7)");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* region = app.add_subcommand("region", "reliable throughput region analysis");
  region->require_subcommand(1);
  auto* point = region->add_subcommand("point", "throughput point of a duty factor vector");
  auto* member = region->add_subcommand("member", "membership test for a throughput vector");
  auto* boundary = region->add_subcommand("boundary", "outer-boundary test via the Perron root");
  auto* project = region->add_subcommand("project", "scale duty factors onto the outer boundary");
  auto* solve = region->add_subcommand("solve", "maximize T1 subject to T2..TM targets");
  for (auto* sub : {point, boundary, project}) sub->add_option("--duty", duty_text)->required();
  member->add_option("--target", duty_text)->required();
  solve->add_option("--targets", duty_text)->required();
  for (auto* sub : {point, member, boundary, project, solve}) {
    sub->add_option("--profile", profile_path)->required();
    sub->add_option("--tol", tol)->check(CLI::PositiveNumber);
  }

  for (auto* sub : {construct, simulate, sweep, point, member, boundary, project, solve})
    sub->add_flag("--allow-disconnected", allow_disconnected, "accept profiles that are not weakly connected");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Inputs inputs;
  json results;
  try {
    if (construct->parsed()) {
      const auto nums = split_list(duty_text);
      if (nums.size() != links)
        throw DomainError("--duty lists " + std::to_string(nums.size()) + " numerators for " + std::to_string(links) +
                          " links");
      DutyFactorSpec spec;
      spec.denominator = q;
      for (const auto& n : nums) {
        const auto r = parse_rational(n);
        if (!is_integer(r) || r < 0) throw DomainError("duty numerators must be nonnegative integers, got " + n);
        spec.numerators.push_back(numerator_of(r).convert_to<std::uint64_t>());
      }
      if (construct->count("--expand") && expand < 2) throw DomainError("--expand must be at least 2");
      auto s = construct_protocol_matrix(spec, SizeLimits{max_entries});
      const auto f = spec.duty_factors();
      if (expand >= 2) {
        if (detail::saturating_mul(s.period(), expand) * s.num_links() > max_entries)
          throw BoundError("expanded matrix exceeds the bound of " + std::to_string(max_entries) + " entries");
        s = k_expand(s, expand);
      }
      {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw Error("cannot write '" + out_path + "'");
        file << format_matrix(s);
      }
      results = {{"M", s.num_links()}, {"L", s.period()}, {"q", q}, {"duty", rationals(f)},
                 {"expansion", expand >= 2 ? expand : 1}, {"matrix_file", out_path},
                 {"matrix_digest", sha256_hex(format_matrix(s))}, {"row_duty", rationals(duty_factors(s))}};
      if (!profile_path.empty()) {
        const auto g = inputs.profile(profile_path, allow_disconnected);
        const auto c = throughput_point(f, g);
        results["C"] = rationals(c);
        if (expand >= 2) {
          std::vector<Rational> guaranteed;
          for (const auto& v : c) guaranteed.push_back(v * Rational(expand - 1, expand));
          results["C_nonsync_guarantee"] = rationals(guaranteed);
        }
      }
    } else if (simulate->parsed()) {
      const auto g = inputs.profile(profile_path, allow_disconnected);
      const auto s = inputs.matrix(matrix_path);
      const auto d = inputs.offsets(offsets_path, g);
      const bool sync = mode == "sync" || (mode == "auto" && d.synchronized());
      if (sync && !d.synchronized()) throw DomainError("fractional offsets given with --mode sync");
      results["mode"] = sync ? "sync" : "nonsync";
      results["T"] = rationals(sync ? sync_throughput(s, g, d) : nonsync_throughput(s, g, d));
      if (sync) {
        json observed = json::object();
        for (std::size_t i = 0; i < g.num_links(); ++i) {
          const auto sub = observed_submatrix(s, g, i, d);
          json rows = json::array();
          for (std::size_t r = 0; r < sub.rows(); ++r) {
            std::string line;
            for (auto v : sub.row(r)) line += static_cast<char>('0' + v);
            rows.push_back(line);
          }
          json ids = json::array();
          for (auto j : g.index_set(i)) ids.push_back(j + 1);
          observed[std::to_string(i + 1)] = {{"rows", ids}, {"matrix", rows}};
        }
        results["observed"] = observed;
      }
    } else if (sweep->parsed()) {
      const auto g = inputs.profile(profile_path, allow_disconnected);
      const auto s = inputs.matrix(matrix_path);
      SweepOptions options{sweep->count("--max-space") ? max_space : default_max_space(), jobs};
      const bool nonsync = mode == "nonsync";
      const auto r = nonsync ? sweep_nonsync_worstcase(s, g, options) : sweep_sync_worstcase(s, g, options);
      results = sweep_json(r, nonsync ? "nonsync" : "sync");
    } else if (region->parsed()) {
      const auto g = inputs.profile(profile_path, allow_disconnected);
      const auto values = parse_rational_list(duty_text);
      if (point->parsed()) {
        results = {{"f", rationals(values)}, {"C", rationals(throughput_point(values, g))}};
      } else if (member->parsed()) {
        const auto m = membership(to_doubles(values), g, tol);
        results = {{"T", rationals(values)}, {"verdict", to_string(m.status)}, {"f", numbers(m.f)},
                   {"C", numbers(m.achieved)}, {"violation", number(m.violation)}};
      } else if (boundary->parsed()) {
        const auto f = to_doubles(values);
        const auto cert = is_on_outer_boundary(f, g, tol);
        results = {{"f", rationals(values)}, {"C", rationals(throughput_point(values, g))},
                   {"rho", number(cert.rho)}, {"rho_error", number(cert.rho_error)},
                   {"verdict", to_string(cert.verdict)}, {"lambda", numbers(cert.lambda)}};
        results["residuals"] = cert.residuals ? residuals_json(*cert.residuals) : json(nullptr);
        const auto exact = exact_on_boundary(values, g);
        results["exact"] = exact ? json(*exact) : json(nullptr);
      } else if (project->parsed()) {
        const auto p = project_to_boundary(to_doubles(values), g, tol);
        json degenerate = json::array();
        for (auto i : p.degenerate) degenerate.push_back(i + 1);
        results = {{"f_in", rationals(values)}, {"rho_in", number(p.rho)}, {"f", numbers(p.f)},
                   {"rho", number(p.projected_rho)}, {"C", numbers(throughput_point(p.f, g))},
                   {"verdict", p.degenerate.empty() ? "on-boundary" : "degenerate-uncharacterized"},
                   {"degenerate", degenerate}};
      } else if (solve->parsed()) {
        SolverOptions options;
        options.tol = solve->count("--tol") ? tol : 1e-7;
        const auto sol = solve_op2(to_doubles(values), g, options);
        results = {{"targets", rationals(values)}, {"f", numbers(sol.f_star)}, {"objective", number(sol.objective)},
                   {"C", numbers(throughput_point(sol.f_star, g))}, {"lambda", numbers(sol.lambda)},
                   {"residuals", residuals_json(sol.residuals)}, {"kkt_residual", number(sol.kkt_residual)},
                   {"converged", sol.converged}, {"verdict", sol.converged ? "optimal" : "not-converged"}};
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json report = {{"tool", "gencoll"},
                 {"version", kVersion},
                 {"command", std::vector<std::string>(args.begin() + (args.empty() ? 0 : 1), args.end())},
                 {"inputs", inputs.digests},
                 {"results", results},
                 {"wall_time_s", number(elapsed)}};
  out << report.dump(2) << '\n';
  return 0;
}

}  // namespace gencoll::cli

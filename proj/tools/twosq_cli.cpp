// Copyright 2026 The twosq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: scan / gaps / construct / verify / constants.
// Exit codes: 0 success, 1 internal error or failed verification,
// 2 usage/domain error, 3 construction infeasible, 4 malformed input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "twosq/analysis.hpp"
#include "twosq/certificate.hpp"
#include "twosq/construct.hpp"
#include "twosq/hp.hpp"
#include "twosq/membership.hpp"

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_constants(double rho, double delta) {
  double f = twosq::f_rho(delta);
  double c = twosq::compute_C(rho, 1e-12);
  double margin = rho - f;

  twosq::hp::Real hp_delta(delta);
  // exact rational delta when the caller passes 1/325565 and friends is not
  // recoverable from a double; the hp path re-evaluates at the same point.
  twosq::hp::Real hp_f = twosq::hp::f_rho(hp_delta);
  twosq::hp::Real hp_c = twosq::hp::compute_C(twosq::hp::Real(rho), twosq::hp::Real(1e-40));
  twosq::hp::Real hp_margin = twosq::hp::Real(rho) - hp_f;

  json out = {
      {"rho", rho},
      {"delta", delta},
      {"f_rho", f},
      {"C_rho", c},
      {"margin", margin},
      {"f_rho_str", fmt17(f)},
      {"C_rho_str", fmt17(c)},
      {"margin_str", fmt17(margin)},
      {"hp", {{"f_rho", hp_f.str(40)}, {"C_rho", hp_c.str(40)}, {"margin", hp_margin.str(40)}}},
  };
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_gaps(const std::string& set_name, int64_t limit, const std::string& out_path,
             const std::string& format, int threads) {
  twosq::GapQuery query;
  if (set_name == "R") query.set = twosq::GapQuery::Set::R;
  else if (set_name == "S") query.set = twosq::GapQuery::Set::S;
  else throw std::invalid_argument("gaps: --set must be R or S");

  twosq::GapReport report = twosq::max_gap(query, limit, threads);

  json summary = {{"N", report.limit_N},
                  {"max_gap", report.max_gap},
                  {"argmax", report.argmax_element},
                  {"set", set_name}};
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    if (format == "json") {
      json full = summary;
      json table = json::array();
      for (const auto& [member, gap] : report.gap_table)
        table.push_back({{"member", member}, {"next", member + gap}, {"gap", gap}});
      full["table"] = table;
      out << full.dump(2) << '\n';
    } else {
      twosq::write_gap_csv(out, report);
    }
  } else if (format == "csv") {
    twosq::write_gap_csv(std::cout, report);
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_scan(int64_t lo, int64_t hi, const std::string& out_path) {
  twosq::MembershipMask mask = twosq::classify_range(lo, hi);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    os = &file;
  }
  *os << "n,in_R,in_S\n";
  for (int64_t n = lo; n <= hi; ++n)
    *os << n << ',' << (mask.r_at(n) ? 1 : 0) << ',' << (mask.s_at(n) ? 1 : 0) << '\n';
  return 0;
}

struct ConstructArgs {
  int64_t a = 2, b = 1;
  double delta = 0.05;
  uint64_t x = 200;
  std::optional<uint64_t> y, z;
  double K = 2.0, M = 6.5, xi = 1.5, epsilon = 0.05;
  std::string N_str = "0";
  uint64_t seed = 0;
  std::string mode = "free";
  std::string strategy = "greedy";
  std::string out_path = "certificate.json";
  int stage1_retries = 64;
};

int cmd_construct(const ConstructArgs& args) {
  mpz_class N;
  try {
    N = mpz_class(args.N_str);
  } catch (const std::exception&) {
    throw std::invalid_argument("construct: --N must be a decimal integer");
  }
  twosq::Mode mode = args.mode == "paper" ? twosq::Mode::Paper : twosq::Mode::Free;
  twosq::Strategy strategy =
      args.strategy == "randomized" ? twosq::Strategy::Randomized : twosq::Strategy::Greedy;

  twosq::SieveParams params =
      twosq::derive_params(args.a, args.b, args.delta, args.x, args.K, args.M, args.xi,
                           args.epsilon, N, args.seed, mode, args.y, args.z);
  twosq::PipelineResult result = twosq::run_pipeline(params, strategy, args.stage1_retries);
  twosq::write_certificate(args.out_path, result.cert);

  // exit status comes from an out-of-process style re-read of the file, not
  // from in-memory state
  twosq::CoverCertificate reread = twosq::read_certificate(args.out_path);
  twosq::VerifyReport verdict = twosq::verify_certificate(reread);

  const twosq::CoverCertificate& c = result.cert;
  std::cout << "stage1: " << c.stage1_residues.size() << " residues, survivors "
            << result.stage1.primed.count() << "/" << result.stage1.doubleprimed.count()
            << " (attempt " << result.stage1.attempts << ")\n";
  size_t covered = 0;
  for (const auto& e : result.cover.entries) covered += e.covered.size();
  std::cout << "stage2: " << result.cover.entries.size() << " medium primes used, "
            << covered << " survivors covered, leftovers "
            << result.cover.leftovers_primed.size() << "/"
            << result.cover.leftovers_doubleprimed.size()
            << (result.cover.rebalanced ? " [sides rebalanced]" : "") << "\n";
  std::cout << "stage3: " << c.stage3_primed.size() << "+" << c.stage3_doubleprimed.size()
            << " cleanup pairings\n";
  std::cout << "interval_1 = [" << c.i1_start.get_str() << ", " << c.i1_end.get_str()
            << "]\ninterval_2 = [" << c.i2_start.get_str() << ", " << c.i2_end.get_str()
            << "]\nn1 = " << c.n1.get_str() << "\nn2 = " << c.n2.get_str()
            << "\nn1 + n2 = N: " << (c.n1 + c.n2 == c.N ? "yes" : "NO") << '\n';
  if (c.range_relaxed) std::cout << "note: d1 range relaxed (P > N/10)\n";
  std::cout << "certificate written to " << args.out_path << "\n";
  std::cout << "verification: " << (verdict.ok ? "ok" : "FAILED") << '\n';
  if (!verdict.ok)
    for (const std::string& v : verdict.violations) std::cerr << "violation: " << v << '\n';
  return verdict.ok ? 0 : 1;
}

int cmd_verify(const std::string& path) {
  twosq::CoverCertificate cert = twosq::read_certificate(path);
  twosq::VerifyReport report = twosq::verify_certificate(cert);
  if (!report.ok) {
    for (const std::string& v : report.violations) std::cerr << "violation: " << v << '\n';
    return 1;
  }
  std::cout << "certificate ok: " << cert.witnesses.size() << " witnesses, n1+n2==N\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sieve laboratory for interval pairs avoiding coprime two-square sums"};
  app.require_subcommand(1);

  // constants
  double rho = 0.5, delta = 1.0 / 325565.0;
  CLI::App* constants = app.add_subcommand("constants", "evaluate f_rho, C(rho) and margins");
  constants->add_option("--rho", rho, "target density rho");
  constants->add_option("--delta", delta, "delta at which to evaluate f_rho");

  // gaps
  std::string set_name = "R", out_path, format = "csv";
  int64_t limit = 1000;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  CLI::App* gaps = app.add_subcommand("gaps", "maximal gap scan for R or S");
  gaps->add_option("--set", set_name, "R or S");
  gaps->add_option("--limit", limit, "scan limit N")->required();
  gaps->add_option("--out", out_path, "write the gap table to this path");
  gaps->add_option("--format", format, "csv or json table format");
  gaps->add_option("--threads", threads, "worker threads");

  // scan
  int64_t lo = 1, hi = 100;
  std::string scan_out;
  CLI::App* scan = app.add_subcommand("scan", "R/S membership table for a range");
  scan->add_option("--lo", lo, "range start")->required();
  scan->add_option("--hi", hi, "range end")->required();
  scan->add_option("--out", scan_out, "write CSV to this path");

  // construct
  ConstructArgs cargs;
  CLI::App* construct = app.add_subcommand("construct", "run the interval-pair construction");
  construct->add_option("--a", cargs.a, "linear form coefficient a");
  construct->add_option("--b", cargs.b, "linear form offset b");
  construct->add_option("--delta", cargs.delta, "density exponent delta");
  construct->add_option("--x", cargs.x, "sieve limit x")->required();
  uint64_t y_opt = 0, z_opt = 0;
  CLI::Option* yflag = construct->add_option("--y", y_opt, "window length (free mode)");
  CLI::Option* zflag = construct->add_option("--z", z_opt, "stage-1 prime bound (free mode)");
  construct->add_option("--K", cargs.K, "progression length factor K");
  construct->add_option("--M", cargs.M, "window exponent M in (6,7]");
  construct->add_option("--xi", cargs.xi, "grid ratio xi > 1");
  construct->add_option("--epsilon", cargs.epsilon, "epsilon in (0,(M-6)/7)");
  construct->add_option("--N", cargs.N_str, "target sum N (decimal)")->required();
  construct->add_option("--seed", cargs.seed, "RNG seed");
  construct->add_option("--mode", cargs.mode, "paper or free");
  construct->add_option("--strategy", cargs.strategy, "greedy or randomized");
  construct->add_option("--out", cargs.out_path, "certificate output path");
  construct->add_option("--stage1-retries", cargs.stage1_retries, "stage-1 retry budget");

  // verify
  std::string verify_path;
  CLI::App* verify = app.add_subcommand("verify", "re-check a certificate file");
  verify->add_option("path", verify_path, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (constants->parsed()) return cmd_constants(rho, delta);
    if (gaps->parsed()) return cmd_gaps(set_name, limit, out_path, format, threads);
    if (scan->parsed()) return cmd_scan(lo, hi, scan_out);
    if (construct->parsed()) {
      if (*yflag) cargs.y = y_opt;
      if (*zflag) cargs.z = z_opt;
      return cmd_construct(cargs);
    }
    if (verify->parsed()) return cmd_verify(verify_path);
  } catch (const twosq::CertificateParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const twosq::ConstructInfeasible& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

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

#ifndef TWOSQ_CERTIFICATE_HPP_
#define TWOSQ_CERTIFICATE_HPP_

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twosq/construct.hpp"

namespace twosq {

class CertificateParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline mpz_class mpz_from(const nlohmann::json& j, const char* field) {
  if (!j.is_string()) throw CertificateParseError(std::string(field) + " must be a decimal string");
  try {
    return mpz_class(j.get<std::string>());
  } catch (const std::exception&) {
    throw CertificateParseError(std::string(field) + ": bad decimal string");
  }
}

template <typename Int>
inline nlohmann::json pair_list_json(const std::vector<std::pair<uint64_t, Int>>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [q, r] : v)
    arr.push_back({std::to_string(q), std::to_string(r)});
  return arr;
}

template <typename Int>
inline std::vector<std::pair<uint64_t, Int>> pair_list_from(const nlohmann::json& arr,
                                                            const char* field) {
  std::vector<std::pair<uint64_t, Int>> out;
  if (!arr.is_array()) throw CertificateParseError(std::string(field) + " must be an array");
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2)
      throw CertificateParseError(std::string(field) + ": entries must be [q, v] pairs");
    out.emplace_back(std::stoull(e[0].get<std::string>()),
                     static_cast<Int>(std::stoll(e[1].get<std::string>())));
  }
  return out;
}

}  // namespace detail

// All big integers travel as decimal strings; plain parameters stay native.
inline nlohmann::json certificate_to_json(const CoverCertificate& c) {
  nlohmann::json j;
  j["format"] = "twosq-certificate/1";
  j["params"] = {
      {"a", c.a}, {"b", c.b}, {"delta", c.delta},
      {"x", c.x}, {"y", c.y}, {"z", c.z},
      {"K", c.K}, {"M", c.M}, {"xi", c.xi}, {"epsilon", c.epsilon},
      {"N", c.N.get_str()}, {"seed", c.seed},
      {"mode", c.mode == Mode::Paper ? "paper" : "free"},
      {"strategy", c.strategy == Strategy::Greedy ? "greedy" : "randomized"},
  };
  j["stages"] = {
      {"stage1", {{"residues", detail::pair_list_json<uint64_t>(c.stage1_residues)}}},
      {"stage2",
       {{"primed", detail::pair_list_json<int64_t>(c.stage2_primed)},
        {"doubleprimed", detail::pair_list_json<int64_t>(c.stage2_doubleprimed)}}},
      {"stage3",
       {{"primed", detail::pair_list_json<int64_t>(c.stage3_primed)},
        {"doubleprimed", detail::pair_list_json<int64_t>(c.stage3_doubleprimed)}}},
  };
  j["d"] = c.d.get_str();
  j["P"] = c.P.get_str();
  j["d1"] = c.d1.get_str();
  j["d2"] = c.d2.get_str();
  j["interval_1"] = {c.i1_start.get_str(), c.i1_end.get_str()};
  j["interval_2"] = {c.i2_start.get_str(), c.i2_end.get_str()};
  j["n1"] = c.n1.get_str();
  j["n2"] = c.n2.get_str();
  nlohmann::json wit = nlohmann::json::array();
  for (const auto& [n, q] : c.witnesses) wit.push_back({n.get_str(), std::to_string(q)});
  j["witnesses"] = wit;
  j["flags"] = {
      {"range_relaxed", c.range_relaxed},
      {"rebalanced_sides", c.rebalanced_sides},
      {"grid_empty", c.grid_empty},
      {"h_range_satisfied", c.h_range_satisfied},
      {"px_le_cbrt_N", c.px_le_cbrt_N},
      {"intervals_overlap", c.intervals_overlap},
      {"leftover_fraction_primed", c.leftover_fraction_primed},
      {"leftover_fraction_doubleprimed", c.leftover_fraction_doubleprimed},
      {"centered_m", c.centered_m.get_str()},
  };
  return j;
}

inline CoverCertificate certificate_from_json(const nlohmann::json& j) {
  CoverCertificate c;
  try {
    const auto& p = j.at("params");
    c.a = p.at("a").get<int64_t>();
    c.b = p.at("b").get<int64_t>();
    c.delta = p.at("delta").get<double>();
    c.x = p.at("x").get<uint64_t>();
    c.y = p.at("y").get<uint64_t>();
    c.z = p.at("z").get<uint64_t>();
    c.K = p.at("K").get<double>();
    c.M = p.at("M").get<double>();
    c.xi = p.at("xi").get<double>();
    c.epsilon = p.at("epsilon").get<double>();
    c.N = detail::mpz_from(p.at("N"), "N");
    c.seed = p.at("seed").get<uint64_t>();
    c.mode = p.at("mode").get<std::string>() == "paper" ? Mode::Paper : Mode::Free;
    c.strategy =
        p.at("strategy").get<std::string>() == "randomized" ? Strategy::Randomized
                                                            : Strategy::Greedy;

    const auto& st = j.at("stages");
    c.stage1_residues =
        detail::pair_list_from<uint64_t>(st.at("stage1").at("residues"), "stage1.residues");
    c.stage2_primed =
        detail::pair_list_from<int64_t>(st.at("stage2").at("primed"), "stage2.primed");
    c.stage2_doubleprimed = detail::pair_list_from<int64_t>(
        st.at("stage2").at("doubleprimed"), "stage2.doubleprimed");
    c.stage3_primed =
        detail::pair_list_from<int64_t>(st.at("stage3").at("primed"), "stage3.primed");
    c.stage3_doubleprimed = detail::pair_list_from<int64_t>(
        st.at("stage3").at("doubleprimed"), "stage3.doubleprimed");

    c.d = detail::mpz_from(j.at("d"), "d");
    c.P = detail::mpz_from(j.at("P"), "P");
    c.d1 = detail::mpz_from(j.at("d1"), "d1");
    c.d2 = detail::mpz_from(j.at("d2"), "d2");
    c.i1_start = detail::mpz_from(j.at("interval_1").at(0), "interval_1");
    c.i1_end = detail::mpz_from(j.at("interval_1").at(1), "interval_1");
    c.i2_start = detail::mpz_from(j.at("interval_2").at(0), "interval_2");
    c.i2_end = detail::mpz_from(j.at("interval_2").at(1), "interval_2");
    c.n1 = detail::mpz_from(j.at("n1"), "n1");
    c.n2 = detail::mpz_from(j.at("n2"), "n2");
    for (const auto& e : j.at("witnesses")) {
      if (!e.is_array() || e.size() != 2)
        throw CertificateParseError("witnesses: entries must be [n, q] pairs");
      c.witnesses.emplace_back(detail::mpz_from(e[0], "witness n"),
                               std::stoull(e[1].get<std::string>()));
    }
    const auto& f = j.at("flags");
    c.range_relaxed = f.at("range_relaxed").get<bool>();
    c.rebalanced_sides = f.at("rebalanced_sides").get<bool>();
    c.grid_empty = f.at("grid_empty").get<bool>();
    c.h_range_satisfied = f.at("h_range_satisfied").get<bool>();
    c.px_le_cbrt_N = f.at("px_le_cbrt_N").get<bool>();
    c.intervals_overlap = f.at("intervals_overlap").get<bool>();
    c.leftover_fraction_primed = f.at("leftover_fraction_primed").get<double>();
    c.leftover_fraction_doubleprimed = f.at("leftover_fraction_doubleprimed").get<double>();
    c.centered_m = detail::mpz_from(f.at("centered_m"), "centered_m");
  } catch (const CertificateParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw CertificateParseError(std::string("certificate: ") + e.what());
  }
  return c;
}

inline void write_certificate(const std::string& path, const CoverCertificate& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << certificate_to_json(c).dump(2) << '\n';
}

inline CoverCertificate read_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CertificateParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CertificateParseError(std::string("malformed JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

}  // namespace twosq

#endif  // TWOSQ_CERTIFICATE_HPP_

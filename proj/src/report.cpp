#include "kdyn/report.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace kdyn {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  std::string out;
  char buf[3];
  for (unsigned char c : digest) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    out += buf;
  }
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const RVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

json to_json(const Polynomial& p) {
  return {{"text", p.to_string()}, {"coefficients_ascending", to_json(RVector(p.coefficients()))}};
}

json to_json(const SpectralResult& s) {
  return {{"radius", s.radius},
          {"error_bound", s.error_bound},
          {"entropy", std::log(std::max(s.radius, 1.0))},
          {"entropy_class", to_string(s.entropy_class)},
          {"exact_class", s.exact_class},
          {"char_poly", to_json(s.char_poly)}};
}

json to_json(const RankRecord& r) {
  json rel = json::array();
  for (std::size_t i = 0; i < r.generator_relations.size(); ++i)
    rel.push_back({{"coeffs", r.generator_relations[i].coeffs},
                   {"residual", r.generator_relations[i].residual},
                   {"certified_null_entropy", i < r.relation_certified.size() && r.relation_certified[i]}});
  json crel = json::array();
  for (const auto& c : r.character_relations) crel.push_back({{"coeffs", c.coeffs}, {"residual", c.residual}});
  return {{"rank", r.rank},
          {"numeric_rank", r.numeric_rank},
          {"row_relation_rank", r.row_relation_rank},
          {"column_relation_rank", r.column_relation_rank},
          {"singular_values", r.singular_values},
          {"generator_relations", rel},
          {"character_relations", crel},
          {"disagreement", r.disagreement},
          {"warnings", r.warnings},
          {"confidence", r.disagreement ? "low" : "high"}};
}

json to_json(const Character& c) {
  return {{"kind", to_string(c.kind)},
          {"values", c.values},
          {"witness", to_json(c.witness)},
          {"residual", c.residual}};
}

json to_json(const CharacterSystem& s, const GeneratorSet& gens) {
  json prim = json::array();
  for (const auto& c : s.primaries) prim.push_back(to_json(c));
  json ext = json::array();
  for (const auto& c : s.extensions) ext.push_back(to_json(c));
  json pi = json::object();
  for (std::size_t i = 0; i < s.Pi.size() && i < gens.size(); ++i) pi[gens.names()[i]] = to_json(s.Pi[i]);
  return {{"n", s.n},
          {"m", s.m()},
          {"primaries", prim},
          {"selected", s.selected},
          {"r_tilde", s.r_tilde},
          {"pi_rank", to_json(s.pi_rank)},
          {"extensions", ext},
          {"extended", s.extended},
          {"Pi", pi}};
}

json word_json(const Word& w, const GeneratorSet& gens) { return w.to_string(gens.names()); }

json to_json(const DiscretenessGauge& g, const GeneratorSet& gens) {
  json kernel = json::array();
  for (const auto& w : g.kernel) kernel.push_back(word_json(w, gens));
  json out = {{"kernel_only", g.kernel_only},
              {"kernel_sample", kernel},
              {"kernel_numeric_checks", g.kernel_numeric},
              {"words", g.words},
              {"truncated", g.truncated},
              {"max_length", g.max_length}};
  out["delta0"] = g.delta0 ? json(*g.delta0) : json(nullptr);
  return out;
}

}  // namespace kdyn

#pragma once

// JSON renderings shared by the certificates and the command line.

#include "kdyn/characters.hpp"
#include "kdyn/group.hpp"
#include "kdyn/spectra.hpp"

#include "json.hpp"

#include <string>

namespace kdyn {

using nlohmann::json;

std::string sha256_hex(const std::string& data);

json to_json(const Eigen::VectorXd& v);
json to_json(const RVector& v);
json to_json(const Polynomial& p);
json to_json(const SpectralResult& s);
json to_json(const RankRecord& r);
json to_json(const Character& c);
json to_json(const CharacterSystem& s, const GeneratorSet& gens);
json to_json(const DiscretenessGauge& g, const GeneratorSet& gens);
json word_json(const Word& w, const GeneratorSet& gens);

}  // namespace kdyn

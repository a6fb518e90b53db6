#include "kdyn/cli.hpp"

#include "kdyn/certify.hpp"
#include "kdyn/errors.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kdyn::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string model_path;
  std::string builtin_spec;
  int max_length = 6;
  double tol = 1e-9;
  double zero_tol = 1e-7;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::size_t word_cap = 1000000;
  int trials = 1000;

  json to_json() const {
    json j = {{"command", command}, {"max_word_length", max_length}, {"tol", tol},   {"zero_tol", zero_tol},
              {"seed", seed},       {"format", format},              {"word_cap", word_cap}, {"trials", trials}};
    if (!model_path.empty()) j["model"] = model_path;
    if (!builtin_spec.empty()) j["builtin"] = builtin_spec;
    return j;
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  ModelBundle bundle;
  std::string digest;
  ValidationReport validation;
};

Loaded load(const RunConfig& cfg) {
  Loaded l;
  if (!cfg.model_path.empty()) {
    std::ifstream in(cfg.model_path, std::ios::binary);
    if (!in) throw ValidationError({"cannot open model file '" + cfg.model_path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    l.digest = sha256_hex(ss.str());
    json j;
    try {
      j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw ValidationError({std::string("invalid JSON: ") + e.what()});
    }
    l.bundle = model_from_json(j, cfg.tol);
  } else {
    try {
      l.bundle = builtin(cfg.builtin_spec);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    l.digest = sha256_hex(serialize(l.bundle));
  }
  l.validation = validate_bundle(l.bundle, cfg.tol);
  if (!l.validation.ok()) throw ValidationError(l.validation.issues);
  return l;
}

json model_summary(const ModelBundle& b) {
  json gens = json::array();
  for (const auto& n : b.gens.names()) gens.push_back(n);
  return {{"name", b.name},
          {"n", b.model.dimension()},
          {"pieces", b.model.piece_sizes()},
          {"generators", gens},
          {"cone", b.cone.describe()},
          {"exactness", to_string(b.flags.exactness)},
          {"aut0_trivial", b.flags.aut0_trivial},
          {"metadata", b.metadata}};
}

json entropy_json(const ModelBundle& b, const RunConfig& cfg) {
  json rows = json::array();
  for (std::size_t i = 0; i < b.gens.size(); ++i) {
    const Matrix& m = b.gens.matrices()[i];
    const auto s = spectral_radius(m, cfg.tol);
    const auto ineq = entropy_inequality_check(m, b.model.dimension(), cfg.tol);
    json row = to_json(s);
    row["generator"] = b.gens.names()[i];
    row["rho_inverse"] = ineq.rho_inverse;
    row["inverse_inequality_holds"] = ineq.holds();
    rows.push_back(row);
  }
  return rows;
}

json reduction_json(const ConnectedReduction& red, const GeneratorSet& gens) {
  json powers = json::array();
  for (const auto& p : red.powers)
    powers.push_back({{"generator", gens.names()[p.index]}, {"power", p.power}, {"capped", p.capped}});
  return {{"powers", powers}, {"warnings", red.warnings}};
}

bool powered(const ConnectedReduction& red) {
  return std::any_of(red.powers.begin(), red.powers.end(), [](const PoweredGenerator& p) { return p.power != 1; });
}

/// Group used for the character analysis: the connected reduction.
ModelBundle analysed(const ModelBundle& b, ConnectedReduction& red) {
  red = connected_reduction(b.gens);
  ModelBundle out = b;
  if (powered(red)) out.gens = red.generators;
  return out;
}

json enumerate_json(const ModelBundle& b, const CharacterSystem& sys, const RunConfig& cfg) {
  const auto e = enumerate_words(b.gens, cfg.max_length, cfg.word_cap);
  json rows = json::array();
  for (const auto& w : e.words) {
    const Eigen::VectorXd pi = Pi_map(sys, w);
    const auto t = null_entropy_test(w.matrix, cfg.tol);
    rows.push_back({{"word", word_json(w, b.gens)},
                    {"length", w.length()},
                    {"Pi", to_json(pi)},
                    {"sup_norm", pi.size() ? pi.cwiseAbs().maxCoeff() : 0.0},
                    {"null_entropy", t.null_entropy},
                    {"exact", t.exact}});
  }
  return {{"words", rows}, {"count", e.words.size()}, {"truncated", e.truncated}, {"max_length", cfg.max_length}};
}

void render_text(const json& j, std::ostream& out, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, out, prefix.empty() ? k : prefix + "." + k);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], out, prefix + "[" + std::to_string(i) + "]");
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const json& j, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "text")
    render_text(j, out, "");
  else
    out << j.dump(2) << "\n";
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto loaded = load(cfg);
  const ModelBundle& b = loaded.bundle;
  json report = {{"config", cfg.to_json()}, {"model_digest", loaded.digest}, {"model", model_summary(b)}};
  int code = 0;
  if (cfg.command == "validate") {
    report["valid"] = true;
    report["notes"] = loaded.validation.notes;
  } else if (cfg.command == "entropy") {
    report["entropy"] = entropy_json(b, cfg);
  } else {
    ConnectedReduction red;
    const ModelBundle a = analysed(b, red);
    report["connected_reduction"] = reduction_json(red, b.gens);
    const auto sys = build_character_system(a.model, a.gens, a.cone, cfg.tol);
    CertificateInputs in{loaded.digest, cfg.seed, cfg.max_length, cfg.tol, cfg.zero_tol};
    if (cfg.command == "characters") {
      report["characters"] = to_json(sys, a.gens);
    } else if (cfg.command == "rank") {
      const auto rec = rank_of_image(sys, a.gens, cfg.tol);
      report["r"] = rec.rank;
      report["r_tilde"] = sys.r_tilde;
      report["confidence"] = to_json(rec);
    } else if (cfg.command == "enumerate") {
      report["enumeration"] = enumerate_json(a, sys, cfg);
    } else {
      const auto certs = certify_all(a, sys, in, cfg.trials);
      json cj = json::array();
      for (const auto& c : certs) {
        cj.push_back(c.to_json());
        if (c.verdict == Verdict::violated) {
          code = 3;
          err << "certificate " << to_string(c.kind) << " violated\n";
        }
      }
      report["certificates"] = cj;
      if (cfg.command == "report") {
        report["entropy"] = entropy_json(b, cfg);
        json partition = {{"null", json::array()}, {"positive", json::array()}};
        for (std::size_t i = 0; i < b.gens.size(); ++i)
          partition[is_null_entropy(b.gens.matrices()[i]) ? "null" : "positive"].push_back(b.gens.names()[i]);
        report["entropy_partition"] = partition;
        report["characters"] = to_json(sys, a.gens);
        report["r"] = certs.front().evidence["r"];
        report["discreteness"] = to_json(discreteness_gauge(sys, a.gens, cfg.max_length, cfg.zero_tol, cfg.word_cap), a.gens);
        const auto audit = unipotency_audit(a.gens, cfg.max_length);
        json aj = {{"pass", audit.pass}, {"checked", audit.checked}, {"truncated", audit.truncated}};
        if (audit.counterexample) {
          aj["counterexample"] = word_json(*audit.counterexample, a.gens);
          aj["char_poly"] = audit.counterexample_char_poly.to_string();
        }
        report["unipotency_audit"] = aj;
      }
    }
  }
  emit(report, cfg, out);
  return code;
}

json error_json(const std::string& type, const std::string& message, const std::vector<std::string>& issues = {}) {
  json j = {{"type", type}, {"message", message}};
  if (!issues.empty()) j["issues"] = issues;
  return {{"error", j}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Entropy, characters and certificates for cone-preserving automorphism groups", "kdyn"};
  app.add_option("command", cfg.command, "validate | entropy | characters | rank | certify | enumerate | report")
      ->required()
      ->check(CLI::IsMember({"validate", "entropy", "characters", "rank", "certify", "enumerate", "report"}));
  auto* model = app.add_option("--model", cfg.model_path, "model JSON file");
  auto* bi = app.add_option("--builtin", cfg.builtin_spec, "built-in model NAME[:params]");
  model->excludes(bi);
  bi->excludes(model);
  app.add_option("--max-word-length", cfg.max_length, "maximum word length L")->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--zero-tol", cfg.zero_tol, "zero tolerance for Pi values")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--word-cap", cfg.word_cap, "maximum number of enumerated words")->check(CLI::PositiveNumber);
  app.add_option("--trials", cfg.trials, "wedge-lemma harness trials")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (cfg.model_path.empty() && cfg.builtin_spec.empty()) throw CLI::RequiredError("--model or --builtin");
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    return execute(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    if (cfg.format == "json") out << error_json("usage", e.what()).dump(2) << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    if (cfg.format == "json") out << error_json("validation", "model validation failed", e.issues()).dump(2) << "\n";
    return 2;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << "\n";
    if (cfg.format == "json") out << error_json("inconsistency", e.what()).dump(2) << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (cfg.format == "json") out << error_json("analysis", e.what()).dump(2) << "\n";
    return 2;
  }
}

}  // namespace kdyn::cli

#include "kdyn/certify.hpp"

#include "kdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace kdyn {

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::rank_bound: return "rank_bound";
    case CertificateKind::hodge: return "hodge";
    case CertificateKind::positivity: return "positivity";
    case CertificateKind::ng_finite: return "ng_finite";
    case CertificateKind::corollary21: return "corollary21";
    case CertificateKind::lemma31: return "lemma31";
  }
  return "rank_bound";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::conditional: return "conditional";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

json CertificateInputs::to_json() const {
  return {{"model_digest", model_digest}, {"seed", seed}, {"max_length", max_length}, {"tol", tol}, {"zero_tol", zero_tol}};
}

json Certificate::to_json() const {
  const json inp = inputs.to_json();
  return {{"schema_version", 1},
          {"kind", kdyn::to_string(kind)},
          {"verdict", kdyn::to_string(verdict)},
          {"evidence", evidence},
          {"assumptions", assumptions},
          {"inputs", inp},
          {"inputs_digest", sha256_hex(kdyn::to_string(kind) + "\n" + inp.dump())}};
}

namespace {

Certificate make(CertificateKind kind, const CertificateInputs& in) {
  Certificate c;
  c.kind = kind;
  c.inputs = in;
  return c;
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// A cone class, exact when the coordinates are (or reconstruct to) rationals.
struct Candidate {
  Eigen::VectorXd value;
  std::optional<RVector> exact;
  std::string source;
};

std::optional<RVector> reconstruct(const Eigen::VectorXd& v) {
  RVector out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Rational q;
    if (!reconstruct_rational(v(i), 10000, 1e-10 * std::max(1.0, std::abs(v(i))), q)) return std::nullopt;
    out.push_back(q);
  }
  return out;
}

bool parallel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return false;
  return (a / na - b / nb).norm() < 1e-8;
}

/// Model rays first, so that a witness parallel to a ray inherits its scale.
Candidate snap(const Eigen::VectorXd& w, const ConeSpec& cone, const std::string& source) {
  if (cone.kind == ConeKind::polyhedral)
    for (std::size_t i = 0; i < cone.rays.size(); ++i)
      if (parallel(w, cone.rays[i])) {
        Candidate c{cone.rays[i], std::nullopt, source + " (ray " + std::to_string(i) + ")"};
        if (!cone.exact_rays.empty()) c.exact = cone.exact_rays[i];
        else c.exact = reconstruct(cone.rays[i]);
        return c;
      }
  return {w, reconstruct(w), source};
}

std::vector<Candidate> candidates(const CharacterSystem& system, const ConeSpec& cone) {
  std::vector<Candidate> out;
  const auto push = [&](const Eigen::VectorXd& w, const std::string& source) {
    if (w.size() == 0 || w.norm() == 0) return;
    for (const auto& c : out)
      if (parallel(c.value, w)) return;
    out.push_back(snap(w, cone, source));
  };
  for (std::size_t i = 0; i < system.primaries.size(); ++i) push(system.primaries[i].witness, "primary " + std::to_string(i));
  for (std::size_t i = 0; i < system.extensions.size(); ++i)
    push(system.extensions[i].witness, "extension " + std::to_string(i));
  if (cone.kind == ConeKind::polyhedral)
    for (std::size_t i = 0; i < cone.rays.size(); ++i) push(cone.rays[i], "cone ray " + std::to_string(i));
  return out;
}

struct WedgeValue {
  bool nonzero = false;
  bool exact = false;
  json value;
};

WedgeValue wedge_of(const CohomologyModel& model, const std::vector<const Candidate*>& classes, double tol) {
  WedgeValue out;
  const bool all_exact = std::all_of(classes.begin(), classes.end(), [](const Candidate* c) { return c->exact.has_value(); });
  if (all_exact) {
    std::vector<GradedClass> gc;
    for (const auto* c : classes) gc.push_back({1, *c->exact});
    const auto w = wedge(model, gc);
    out.exact = true;
    out.nonzero = std::any_of(w.coords.begin(), w.coords.end(), [](const Rational& q) { return q != 0; });
    out.value = to_json(w.coords);
    return out;
  }
  std::vector<Eigen::VectorXd> vs;
  for (const auto* c : classes) vs.push_back(c->value);
  Eigen::VectorXd mag;
  const auto w = wedge_piece1(model, vs, &mag);
  const double rel = std::max(64 * std::numeric_limits<double>::epsilon(), tol);
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (std::abs(w(i)) > rel * mag(i)) out.nonzero = true;
  out.value = to_json(w);
  return out;
}

/// First size-k combination (lexicographic) with non-vanishing wedge.
std::optional<std::vector<std::size_t>> find_wedge(const CohomologyModel& model, const std::vector<Candidate>& cands,
                                                   std::size_t k, double tol, std::size_t& tried, WedgeValue& value,
                                                   std::size_t budget = 20000) {
  std::vector<std::size_t> idx;
  std::optional<std::vector<std::size_t>> found;
  std::function<bool(std::size_t)> rec = [&](std::size_t start) {
    if (idx.size() == k) {
      if (++tried > budget) return true;
      std::vector<const Candidate*> cs;
      for (auto i : idx) cs.push_back(&cands[i]);
      auto w = wedge_of(model, cs, tol);
      if (w.nonzero) {
        value = w;
        found = idx;
        return true;
      }
      return false;
    }
    for (std::size_t i = start; i < cands.size(); ++i) {
      idx.push_back(i);
      if (rec(i + 1)) return true;
      idx.pop_back();
    }
    return false;
  };
  rec(0);
  return found;
}

json candidate_json(const Candidate& c) {
  json j = {{"source", c.source}, {"value", to_json(c.value)}};
  j["exact"] = c.exact ? to_json(*c.exact) : json(nullptr);
  return j;
}

}  // namespace

Certificate rank_bound_certificate(const CharacterSystem& system, const GeneratorSet& gens, const CertificateInputs& in) {
  auto cert = make(CertificateKind::rank_bound, in);
  const auto record = rank_of_image(system, gens, in.tol);
  const int bound = system.n - 1;
  json table = json::array();
  for (const auto& c : system.primaries) table.push_back(to_json(c));
  for (const auto& c : system.extensions) table.push_back(to_json(c));
  cert.evidence = {{"r", record.rank}, {"bound", bound}, {"tight", record.rank == bound}, {"characters", table},
                   {"rank_record", to_json(record)}};
  cert.assumptions.push_back("rank from SVD cross-checked by integer relation search (coefficients <= 2^16)");
  if (record.rank <= bound) {
    cert.verdict = Verdict::certified;
  } else {
    cert.verdict = Verdict::violated;
    json rows = json::object();
    for (std::size_t i = 0; i < system.Pi.size(); ++i) rows[gens.names()[i]] = to_json(system.Pi[i]);
    cert.evidence["independent_vectors"] = rows;
  }
  return cert;
}

Certificate hodge_bound_check(const CohomologyModel& model, int r, const CertificateInputs& in) {
  auto cert = make(CertificateKind::hodge, in);
  const int n = model.dimension();
  cert.evidence = {{"r", r}, {"n", n}};
  if (r != n - 1) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["reason"] = "hypothesis r = n-1 not met";
    return cert;
  }
  json checks = json::array();
  bool ok = true;
  for (int k = 1; k <= n - 1; ++k) {
    const long long h = static_cast<long long>(model.piece_size(k));
    const bool refined = (n - 1) % k == 0;
    const long long bound = binom(n - 1, k) + (refined ? 1 : 0);
    const bool holds = h >= bound;
    ok = ok && holds;
    checks.push_back({{"k", k}, {"h_k", h}, {"bound", bound}, {"refined", refined}, {"holds", holds}});
  }
  cert.evidence["checks"] = checks;
  cert.verdict = ok ? Verdict::certified : Verdict::violated;
  return cert;
}

Certificate positivity_witness(const CohomologyModel& model, const CharacterSystem& system, const ConeSpec& cone, int r,
                               const CertificateInputs& in) {
  auto cert = make(CertificateKind::positivity, in);
  const auto cands = candidates(system, cone);
  const auto k = static_cast<std::size_t>(r + 1);
  cert.evidence = {{"r", r}, {"classes_needed", k}, {"candidates", cands.size()}};
  if (r + 1 > model.dimension()) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["reason"] = "r + 1 exceeds the top degree";
    return cert;
  }
  std::size_t tried = 0;
  WedgeValue value;
  const auto found = find_wedge(model, cands, k, in.tol, tried, value);
  cert.evidence["tuples_tried"] = tried;
  if (!found) {
    cert.verdict = Verdict::inconclusive;
    json log = json::array();
    for (const auto& c : cands) log.push_back(candidate_json(c));
    cert.evidence["search_log"] = log;
    cert.evidence["reason"] = "every candidate tuple wedges to zero";
    return cert;
  }
  json classes = json::array();
  for (auto i : *found) classes.push_back(candidate_json(cands[i]));
  cert.evidence["classes"] = classes;
  cert.evidence["wedge"] = value.value;
  cert.evidence["wedge_grade"] = r + 1;
  cert.evidence["exact"] = value.exact;
  if (!value.exact) cert.assumptions.push_back("non-vanishing decided by a floating-point error bound");
  cert.verdict = Verdict::certified;
  return cert;
}

Certificate ng_finiteness_certificate(const CohomologyModel& model, const GeneratorSet& gens,
                                      const CharacterSystem& system, const ConeSpec& cone, int r, bool aut0_trivial,
                                      const CertificateInputs& in) {
  auto cert = make(CertificateKind::ng_finite, in);
  const int n = model.dimension();
  cert.evidence = {{"r", r}, {"n", n}, {"aut0_trivial", aut0_trivial}};
  cert.assumptions.push_back("N(G) sampled by null-entropy words of length <= " + std::to_string(in.max_length));
  cert.assumptions.push_back("a class of the closed cone with c^n != 0 is taken to be Kaehler");
  if (r != n - 1) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["failed_step"] = "hypothesis r = n-1 not met";
    return cert;
  }
  // Null-entropy sample.
  const auto words = enumerate_words(gens, in.max_length, 200000);
  std::vector<const Word*> sample;
  bool sample_exact = true;
  for (const auto& w : words.words) {
    const auto t = null_entropy_test(w.matrix, in.tol);
    if (!t.null_entropy) continue;
    sample.push_back(&w);
    sample_exact = sample_exact && t.exact;
  }
  json sample_words = json::array();
  for (const auto* w : sample) sample_words.push_back(word_json(*w, gens));
  cert.evidence["ng_sample"] = {{"words", sample_words}, {"enumerated", words.words.size()},
                                {"truncated", words.truncated}, {"exact_membership", sample_exact}};

  auto cands = candidates(system, cone);
  std::vector<Candidate> fixed;
  bool fixed_exact = true;
  for (auto& c : cands) {
    bool ok = true;
    for (const auto* w : sample) {
      if (w->matrix.is_identity()) continue;
      if (c.exact) {
        const RVector img = w->matrix * *c.exact;
        if (img != *c.exact) ok = false;
      } else {
        fixed_exact = false;
        const Eigen::VectorXd img = w->matrix.to_eigen() * c.value;
        if ((img - c.value).norm() > in.tol * std::max(1.0, c.value.norm())) ok = false;
      }
      if (!ok) break;
    }
    if (ok) fixed.push_back(c);
  }
  cert.evidence["fixed_candidates"] = fixed.size();
  cert.evidence["fixed_check_exact"] = fixed_exact;
  std::size_t tried = 0;
  WedgeValue wv;
  const auto found = find_wedge(model, fixed, static_cast<std::size_t>(n), in.tol, tried, wv);
  if (!found) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["failed_step"] = fixed.size() + 1 == static_cast<std::size_t>(n)
                                       ? "only n-1 fixed classes found"
                                       : "no n fixed classes with non-vanishing wedge";
    return cert;
  }
  json classes = json::array();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.piece_size(1)));
  std::optional<RVector> c_exact = RVector(model.piece_size(1), Rational(0));
  for (auto i : *found) {
    classes.push_back(candidate_json(fixed[i]));
    c += fixed[i].value;
    if (c_exact && fixed[i].exact)
      for (std::size_t k = 0; k < c_exact->size(); ++k) (*c_exact)[k] += (*fixed[i].exact)[k];
    else
      c_exact.reset();
  }
  if (!c_exact) c_exact = reconstruct(c);
  cert.evidence["classes"] = classes;
  cert.evidence["wedge"] = wv.value;
  cert.evidence["c"] = to_json(c);
  if (membership(cone, c, in.tol) == Membership::outside) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["failed_step"] = "c = sum c_i lies outside the cone";
    return cert;
  }
  Candidate cc{c, c_exact, "c"};
  std::vector<const Candidate*> power(static_cast<std::size_t>(n), &cc);
  const auto top = wedge_of(model, power, in.tol);
  cert.evidence["c_exact"] = c_exact ? to_json(*c_exact) : json(nullptr);
  cert.evidence["c_power_n"] = top.value;
  cert.evidence["exact"] = top.exact;
  if (!top.nonzero) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["failed_step"] = "c^n = 0";
    return cert;
  }
  if (!top.exact) cert.assumptions.push_back("c^n != 0 decided by a floating-point error bound");
  if (aut0_trivial) {
    cert.verdict = Verdict::certified;
  } else {
    cert.verdict = Verdict::conditional;
    cert.assumptions.push_back("finite modulo Aut0(X): Aut0(X) trivial is not established");
  }
  return cert;
}

Certificate corollary21_check(const GeneratorSet& gens, const ConeSpec& cone, const std::vector<Word>& words,
                              const CertificateInputs& in) {
  auto cert = make(CertificateKind::corollary21, in);
  const auto common = common_invariant_ray(gens.matrices(), cone, in.tol);
  if (!common.ray) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence = {{"reason", to_string(common.reason)}, {"detail", common.detail}};
    return cert;
  }
  const Eigen::VectorXd& c = common.ray->vector;
  cert.evidence = {{"common_ray", to_json(c)}, {"method", common.method}, {"ray_residual", common.ray->residual}};
  json rows = json::array();
  bool ok = true;
  for (const auto& w : words) {
    const Eigen::VectorXd img = w.matrix.to_eigen() * c;
    const double chi = img.dot(c) / c.dot(c);
    const auto spec = spectral_radius(w.matrix, in.tol);
    const double slack = 2 * in.tol + spec.error_bound;
    const bool holds = chi > 0 && chi <= spec.radius + slack;
    ok = ok && holds;
    rows.push_back({{"word", word_json(w, gens)}, {"chi", chi}, {"rho", spec.radius}, {"slack", slack}, {"holds", holds}});
  }
  cert.evidence["checks"] = rows;
  cert.verdict = ok ? Verdict::certified : Verdict::violated;
  return cert;
}

Certificate lemma31_harness(const CohomologyModel& model, const GeneratorSet& gens, const ConeSpec& cone, int trials,
                            const CertificateInputs& in) {
  auto cert = make(CertificateKind::lemma31, in);
  const int n = model.dimension();
  cert.evidence = {{"trials", trials}};
  if (n < 3 || cone.kind != ConeKind::polyhedral || cone.rays.empty() || gens.size() == 0) {
    cert.verdict = Verdict::inconclusive;
    cert.evidence["reason"] = n < 3 ? "needs n >= 3 (1 <= t <= n-2)" : "needs a polyhedral cone and generators";
    return cert;
  }
  std::vector<Candidate> rays;
  for (std::size_t i = 0; i < cone.rays.size(); ++i)
    rays.push_back({cone.rays[i],
                    cone.exact_rays.empty() ? reconstruct(cone.rays[i]) : std::optional<RVector>(cone.exact_rays[i]),
                    "ray " + std::to_string(i)});
  const bool exact = std::all_of(rays.begin(), rays.end(), [](const Candidate& c) { return c.exact.has_value(); });
  cert.evidence["exact"] = exact;
  if (!exact) cert.assumptions.push_back("eigen-equations and vanishing decided within tol (irrational cone rays)");

  std::mt19937_64 rng(in.seed);
  std::uniform_int_distribution<int> pick_t(1, n - 2);
  std::uniform_int_distribution<std::size_t> pick_ray(0, rays.size() - 1);
  std::uniform_int_distribution<int> pick_len(1, std::max(1, in.max_length));
  std::size_t satisfying = 0, not_eigen = 0, degenerate = 0, equal = 0, nonvanishing = 0;
  json violations = json::array();
  for (int trial = 0; trial < trials; ++trial) {
    const int t = pick_t(rng);
    const Word f = gens.random_word(static_cast<std::size_t>(pick_len(rng)), rng);
    std::vector<std::size_t> chosen;
    for (int i = 0; i < t + 2; ++i) chosen.push_back(pick_ray(rng));
    // Eigenvalue of f on each chosen ray.
    std::vector<Rational> mu_exact;
    std::vector<double> mu;
    bool eigen = true;
    const Eigen::MatrixXd fd = f.matrix.to_eigen();
    for (auto i : chosen) {
      if (exact) {
        const RVector img = f.matrix * *rays[i].exact;
        const RVector& v = *rays[i].exact;
        std::size_t p = 0;
        while (p < v.size() && v[p] == 0) ++p;
        const Rational m = img[p] / v[p];
        for (std::size_t k = 0; k < v.size() && eigen; ++k)
          if (img[k] != m * v[k]) eigen = false;
        if (m <= 0) eigen = false;
        mu_exact.push_back(m);
        mu.push_back(to_double(m));
      } else {
        const Eigen::VectorXd& v = rays[i].value;
        const Eigen::VectorXd img = fd * v;
        const double m = img.dot(v) / v.dot(v);
        if ((img - m * v).norm() > in.tol * std::max(1.0, img.norm()) || m <= 0) eigen = false;
        mu.push_back(m);
      }
    }
    if (!eigen) {
      ++not_eigen;
      continue;
    }
    // chosen = (c_1..c_t, c, c').
    std::vector<const Candidate*> base, with_c, with_cp, all;
    for (int i = 0; i < t; ++i) base.push_back(&rays[chosen[static_cast<std::size_t>(i)]]);
    const Candidate* c = &rays[chosen[static_cast<std::size_t>(t)]];
    const Candidate* cp = &rays[chosen[static_cast<std::size_t>(t + 1)]];
    with_c = base;
    with_c.push_back(c);
    with_cp = base;
    with_cp.push_back(cp);
    all = with_c;
    all.push_back(cp);
    bool same;
    if (exact) {
      Rational lam = 1, lamp = 1;
      for (int i = 0; i < t; ++i) {
        lam *= mu_exact[static_cast<std::size_t>(i)];
        lamp *= mu_exact[static_cast<std::size_t>(i)];
      }
      lam *= mu_exact[static_cast<std::size_t>(t)];
      lamp *= mu_exact[static_cast<std::size_t>(t + 1)];
      same = lam == lamp;
    } else {
      same = std::abs(mu[static_cast<std::size_t>(t)] - mu[static_cast<std::size_t>(t + 1)]) <=
             1e-9 * std::max(mu[static_cast<std::size_t>(t)], mu[static_cast<std::size_t>(t + 1)]);
    }
    if (same) {
      ++equal;
      continue;
    }
    if (!wedge_of(model, with_c, in.tol).nonzero) {
      ++degenerate;
      continue;
    }
    if (wedge_of(model, all, in.tol).nonzero) {
      ++nonvanishing;
      continue;
    }
    ++satisfying;
    const auto concl = wedge_of(model, with_cp, in.tol);
    if (concl.nonzero && violations.size() < 10) {
      json inst = json::array();
      for (auto i : chosen) inst.push_back(rays[i].source);
      violations.push_back({{"t", t}, {"f", word_json(f, gens)}, {"classes", inst}, {"wedge", concl.value}});
    }
  }
  cert.evidence["satisfying"] = satisfying;
  cert.evidence["skipped"] = {{"not_eigen", not_eigen}, {"equal_eigenvalues", equal}, {"degenerate_wedge", degenerate},
                              {"wedge_with_c_prime_nonzero", nonvanishing}};
  cert.evidence["violations"] = violations;
  if (!violations.empty())
    cert.verdict = Verdict::violated;
  else if (satisfying == 0)
    cert.verdict = Verdict::inconclusive;
  else
    cert.verdict = Verdict::certified;
  return cert;
}

std::vector<Certificate> certify_all(const ModelBundle& bundle, const CharacterSystem& system,
                                     const CertificateInputs& in, int lemma31_trials) {
  std::vector<Certificate> out;
  out.push_back(rank_bound_certificate(system, bundle.gens, in));
  const int r = out.back().evidence["r"].get<int>();
  out.push_back(hodge_bound_check(bundle.model, r, in));
  out.push_back(positivity_witness(bundle.model, system, bundle.cone, r, in));
  out.push_back(ng_finiteness_certificate(bundle.model, bundle.gens, system, bundle.cone, r, bundle.flags.aut0_trivial, in));
  std::vector<Word> words{bundle.gens.identity()};
  for (std::size_t i = 0; i < bundle.gens.size(); ++i) {
    words.push_back(bundle.gens.generator(i, 1));
    words.push_back(bundle.gens.generator(i, -1));
  }
  out.push_back(corollary21_check(bundle.gens, bundle.cone, words, in));
  out.push_back(lemma31_harness(bundle.model, bundle.gens, bundle.cone, lemma31_trials, in));
  return out;
}

}  // namespace kdyn

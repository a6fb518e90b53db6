// Acceptance run: one PASS/FAIL line per criterion.

#include "kdyn/certify.hpp"
#include "kdyn/cli.hpp"
#include "kdyn/errors.hpp"
#include "kdyn/spectra.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace kdyn;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

CharacterSystem system_of(const ModelBundle& b) { return build_character_system(b.model, b.gens, b.cone); }

const std::vector<std::string> kBuiltins{"squarefree_torus:2", "squarefree_torus:3", "squarefree_torus:4",
                                         "triangular_solvable", "lorentz_surface"};

Outcome rank_bound() {
  const auto start = Clock::now();
  Outcome o;
  std::ostringstream d;
  for (int n = 2; n <= 4; ++n) {
    const auto b = builtin("squarefree_torus:" + std::to_string(n));
    const int r = rank_of_image(system_of(b), b.gens).rank;
    d << "n=" << n << " r=" << r << "; ";
    o.pass = o.pass && r <= n - 1;
    if (n == 3) o.pass = o.pass && r == 2;
  }
  const double t = seconds_since(start);
  d << "time " << t << " s";
  o.pass = o.pass && t <= 10;
  o.detail = d.str();
  return o;
}

Outcome hodge() {
  Outcome o;
  std::ostringstream d;
  CertificateInputs in;
  for (int n = 2; n <= 6; ++n) {
    const auto b = builtin("squarefree_torus:" + std::to_string(n));
    const int r = rank_of_image(system_of(b), b.gens).rank;
    const auto cert = hodge_bound_check(b.model, r, in);
    d << "n=" << n << " " << to_string(cert.verdict) << "; ";
    o.pass = o.pass && cert.verdict == Verdict::certified;
  }
  o.detail = d.str();
  return o;
}

Outcome lie_kolchin() {
  Outcome o;
  double worst_res = 0, worst_gap = 0, worst_chi = -1e300;
  for (const auto& name : kBuiltins) {
    const auto b = builtin(name);
    for (const auto& m : b.gens.matrices()) {
      const auto ray = bpf_eigenvector(m, b.cone, 1e-9);
      const double gap = std::abs(ray.eigenvalue - spectral_radius(m, 1e-9).radius);
      worst_res = std::max(worst_res, ray.residual);
      worst_gap = std::max(worst_gap, gap);
      o.pass = o.pass && ray.residual <= 1e-9 && gap <= 2e-9;
    }
    const auto common = common_invariant_ray(b.gens.matrices(), b.cone, 1e-9);
    if (!common.ray) {
      o.pass = false;
      o.detail += name + ": no common ray; ";
      continue;
    }
    for (std::size_t i = 0; i < b.gens.size(); ++i) {
      const double excess = common.ray->eigenvalues[i] - spectral_radius(b.gens.matrices()[i], 1e-9).radius;
      worst_chi = std::max(worst_chi, excess);
      o.pass = o.pass && excess <= 2e-9;
    }
  }
  std::ostringstream d;
  d << "max residual " << worst_res << ", max |lambda - rho| " << worst_gap << ", max chi - rho " << worst_chi;
  o.detail += d.str();
  return o;
}

Matrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
  Matrix m = Matrix::identity(n);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2), kind(0, 4), steps(1, 8);
  const int s = steps(rng);
  for (int k = 0; k < s; ++k) {
    Matrix e = Matrix::identity(n);
    const auto i = idx(rng), j = idx(rng);
    const int c = kind(rng);
    if (i == j || c == 0) {
      e(i, i) = -1;
    } else if (c == 1) {
      e(i, i) = 0;
      e(j, j) = 0;
      e(i, j) = 1;
      e(j, i) = 1;
    } else {
      e(i, j) = coef(rng);
    }
    m = m * e;
  }
  return m;
}

Outcome dichotomy() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  int nulls = 0, mismatches = 0;
  for (int t = 0; t < 500; ++t) {
    const auto m = random_unimodular(size(rng), rng);
    const bool null = is_null_entropy(m);
    const double r = spectral_radius(m, 1e-9).radius;
    if (null) ++nulls;
    if (null != (r >= 1 - 1e-6 && r <= 1 + 1e-6)) ++mismatches;
  }
  Matrix lehmer(10, 10);
  const long long c[] = {1, 1, 0, -1, -1, -1, -1, -1, 0, 1};
  for (std::size_t i = 1; i < 10; ++i) lehmer(i, i - 1) = 1;
  for (std::size_t i = 0; i < 10; ++i) lehmer(i, 9) = -c[i];
  const auto s = spectral_radius(lehmer, 1e-9);
  o.pass = mismatches == 0 && s.entropy_class == EntropyClass::positive && std::abs(s.radius - 1.176281) <= 1e-6;
  std::ostringstream d;
  d << "500 matrices, " << nulls << " null, " << mismatches << " mismatches; Lehmer rho = " << s.radius;
  o.detail = d.str();
  return o;
}

Outcome homomorphism() {
  Outcome o;
  double worst = 0;
  for (const auto& name : kBuiltins) {
    const auto b = builtin(name);
    const auto sys = system_of(b);
    o.pass = o.pass && sys.m() <= b.model.piece_size(1);
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    for (int t = 0; t < 100; ++t) {
      const auto w1 = b.gens.random_word(len(rng), rng), w2 = b.gens.random_word(len(rng), rng);
      const Eigen::VectorXd d = Pi_map(sys, b.gens.multiply(w1, w2)) - Pi_map(sys, w1) - Pi_map(sys, w2);
      worst = std::max(worst, d.size() ? d.cwiseAbs().maxCoeff() : 0.0);
    }
  }
  o.pass = o.pass && worst <= 1e-8;
  std::ostringstream d;
  d << "max additivity defect " << worst << " over " << kBuiltins.size() << " built-ins";
  o.detail = d.str();
  return o;
}

Outcome discreteness() {
  Outcome o;
  const auto b = builtin("squarefree_torus:3");
  try {
    const auto g = discreteness_gauge(system_of(b), b.gens, 6, 1e-7);
    bool kernel_ok = true;
    for (const auto& w : g.kernel) kernel_ok = kernel_ok && null_entropy_test(w.matrix).null_entropy;
    o.pass = g.delta0 && *g.delta0 > 1e-3 && kernel_ok;
    std::ostringstream d;
    d << "delta0 = " << (g.delta0 ? *g.delta0 : 0.0) << ", kernel words " << g.kernel.size() << ", words " << g.words;
    o.detail = d.str();
  } catch (const InconsistencyError& e) {
    o.pass = false;
    o.detail = e.what();
  }
  return o;
}

Outcome unipotency() {
  const auto tri = unipotency_audit(builtin("triangular_solvable").gens, 6);
  const auto ctrl = unipotency_audit(GeneratorSet::from_matrices({Matrix{{2, 1}, {1, 1}}, Matrix{{0, -1}, {1, 0}}}), 6);
  Outcome o;
  o.pass = tri.pass && !ctrl.pass && ctrl.counterexample.has_value();
  std::ostringstream d;
  d << "triangular pass=" << tri.pass << " (" << tri.checked << " checks); control counterexample "
    << (ctrl.counterexample ? ctrl.counterexample->to_string({"F2", "J"}) + " with char poly " +
                                  ctrl.counterexample_char_poly.to_string()
                            : "none");
  o.detail = d.str();
  return o;
}

Outcome wedge_lemma() {
  const auto start = Clock::now();
  const auto b = builtin("squarefree_torus:4");
  CertificateInputs in;
  in.seed = 31;
  const auto cert = lemma31_harness(b.model, b.gens, b.cone, 1000, in);
  const double t = seconds_since(start);
  Outcome o;
  const int sat = cert.evidence.value("satisfying", 0);
  const auto viol = cert.evidence.value("violations", json::array()).size();
  o.pass = sat >= 100 && viol == 0 && t <= 60;
  std::ostringstream d;
  d << sat << " hypothesis-satisfying instances, " << viol << " violations, " << t << " s";
  o.detail = d.str();
  return o;
}

Outcome ng_finite() {
  const auto b = builtin("squarefree_torus:3");
  const auto sys = system_of(b);
  CertificateInputs in;
  const auto yes = ng_finiteness_certificate(b.model, b.gens, sys, b.cone, 2, true, in);
  const auto no = ng_finiteness_certificate(b.model, b.gens, sys, b.cone, 2, false, in);
  Outcome o;
  o.pass = yes.verdict == Verdict::certified && no.verdict == Verdict::conditional && yes.evidence["exact"] == true &&
           yes.evidence["c_power_n"] == json::array({"6"});
  o.detail = "flag true: " + to_string(yes.verdict) + ", c^3 = " + yes.evidence.value("c_power_n", json()).dump() +
             "; flag false: " + to_string(no.verdict);
  return o;
}

Outcome reproducible() {
  const std::vector<std::string> args{"report", "--builtin", "squarefree_torus:3", "--seed", "11"};
  std::ostringstream a, b, e;
  const int ca = cli::run(args, a, e), cb = cli::run(args, b, e);
  Outcome o;
  o.pass = ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty();
  o.detail = std::to_string(a.str().size()) + " bytes, identical = " + (a.str() == b.str() ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"rank bound r(G) <= n-1, tight for n=3", rank_bound},
      {"Hodge inequalities for squarefree tori n <= 6", hodge},
      {"BPF eigenvectors and common invariant rays", lie_kolchin},
      {"entropy dichotomy on random unimodular matrices", dichotomy},
      {"Pi is a homomorphism, m <= h_1", homomorphism},
      {"discreteness and kernel = N(G)", discreteness},
      {"unipotent commutators", unipotency},
      {"wedge lemma harness", wedge_lemma},
      {"N(G) finiteness certificate", ng_finite},
      {"reproducible reports", reproducible},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ["
              << o.detail << "]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

#include "kdyn/group.hpp"

#include "kdyn/errors.hpp"
#include "kdyn/spectra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace kdyn {

std::string Word::to_string(const std::vector<std::string>& names) const {
  if (letters.empty()) return "1";
  std::ostringstream out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out << '.';
    const auto& l = letters[i];
    out << (l.gen < names.size() ? names[l.gen] : "g" + std::to_string(l.gen));
    if (l.exp < 0) out << "^-1";
  }
  return out.str();
}

GeneratorSet::GeneratorSet(std::vector<AutomorphismAction> actions) : actions_(std::move(actions)) {
  for (const auto& a : actions_) {
    const Matrix& m = a.piece1();
    if (!mats_.empty() && m.rows() != mats_.front().rows()) throw DimensionError("generators act on different spaces");
    if (m.determinant() == 0) throw ParameterError("generator '" + a.name + "' is not invertible");
    mats_.push_back(m);
    inverses_.push_back(m.inverse());
    names_.push_back(a.name);
  }
}

GeneratorSet GeneratorSet::from_matrices(const std::vector<Matrix>& mats) {
  std::vector<AutomorphismAction> actions;
  for (std::size_t i = 0; i < mats.size(); ++i) actions.push_back({"g" + std::to_string(i), {mats[i]}});
  return GeneratorSet(std::move(actions));
}

std::vector<Letter> free_reduce(std::vector<Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (const auto& l : letters) {
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word GeneratorSet::identity() const { return Word{{}, Matrix::identity(dim())}; }

Word GeneratorSet::generator(std::size_t i, int exp) const {
  if (i >= size()) throw ParameterError("generator index out of range");
  return word({{i, exp > 0 ? 1 : -1}});
}

Word GeneratorSet::word(const std::vector<Letter>& letters) const {
  Word w{free_reduce(letters), Matrix::identity(dim())};
  for (const auto& l : w.letters) {
    if (l.gen >= size() || (l.exp != 1 && l.exp != -1)) throw ParameterError("invalid letter");
    w.matrix = w.matrix * letter_matrix(l);
  }
  return w;
}

Word GeneratorSet::multiply(const Word& a, const Word& b) const {
  std::vector<Letter> letters = a.letters;
  letters.insert(letters.end(), b.letters.begin(), b.letters.end());
  return Word{free_reduce(std::move(letters)), a.matrix * b.matrix};
}

Word GeneratorSet::inverse(const Word& w) const {
  std::vector<Letter> letters(w.letters.rbegin(), w.letters.rend());
  for (auto& l : letters) l.exp = -l.exp;
  return Word{std::move(letters), w.matrix.inverse()};
}

Word GeneratorSet::commutator(const Word& a, const Word& b) const {
  return multiply(multiply(a, b), multiply(inverse(a), inverse(b)));
}

Word GeneratorSet::random_word(std::size_t length, std::mt19937_64& rng) const {
  if (size() == 0) return identity();
  std::vector<Letter> letters;
  std::uniform_int_distribution<std::size_t> pick(0, 2 * size() - 1);
  while (letters.size() < length) {
    const std::size_t r = pick(rng);
    const Letter l{r / 2, r % 2 == 0 ? 1 : -1};
    if (!letters.empty() && letters.back().gen == l.gen && letters.back().exp == -l.exp) continue;
    letters.push_back(l);
  }
  return word(letters);
}

Enumeration enumerate_words(const GeneratorSet& gens, int max_length, std::size_t cap) {
  if (max_length < 1) throw ParameterError("maximum word length must be at least 1");
  if (cap == 0) throw ParameterError("word cap must be positive");
  Enumeration out;
  out.max_length = max_length;
  out.cap = cap;
  std::unordered_set<std::string> seen;
  Word id = gens.identity();
  seen.insert(id.matrix.key());
  out.words.push_back(id);
  std::vector<std::size_t> frontier{0};
  for (int len = 1; len <= max_length && !out.truncated; ++len) {
    std::vector<std::size_t> next;
    for (std::size_t parent : frontier) {
      for (std::size_t g = 0; g < gens.size() && !out.truncated; ++g)
        for (int exp : {1, -1}) {
          const Word& w = out.words[parent];
          const Letter l{g, exp};
          if (!w.letters.empty() && w.letters.back().gen == g && w.letters.back().exp == -exp) continue;
          Word child{w.letters, w.matrix * gens.letter_matrix(l)};
          child.letters.push_back(l);
          if (!seen.insert(child.matrix.key()).second) continue;
          if (out.words.size() >= cap) {
            out.truncated = true;
            break;
          }
          next.push_back(out.words.size());
          out.words.push_back(std::move(child));
        }
      if (out.truncated) break;
    }
    frontier = std::move(next);
  }
  return out;
}

namespace {

struct Element {
  Word word;
  Matrix inverse;
  int cost = 0;
};

// Non-identity group elements given by words of length <= max_length.
std::vector<Element> word_elements(const GeneratorSet& gens, int max_length, std::size_t cap, bool& truncated) {
  std::vector<Element> out;
  if (max_length < 1) return out;
  const auto e = enumerate_words(gens, max_length, cap);
  truncated = truncated || e.truncated;
  for (std::size_t i = 1; i < e.words.size(); ++i) {
    Matrix inv = Matrix::identity(gens.dim());
    for (auto it = e.words[i].letters.rbegin(); it != e.words[i].letters.rend(); ++it)
      inv = inv * gens.letter_matrix({it->gen, -it->exp});
    out.push_back({e.words[i], std::move(inv), static_cast<int>(e.words[i].length())});
  }
  return out;
}

Word inverse_word(const Element& e) {
  std::vector<Letter> letters(e.word.letters.rbegin(), e.word.letters.rend());
  for (auto& l : letters) l.exp = -l.exp;
  return Word{std::move(letters), e.inverse};
}

// Distinct non-identity commutators [a, b] with cost(a) + cost(b) <= L, ordered by cost then (a, b).
std::vector<Element> sample_commutators(const std::vector<Element>& elems, int max_length, std::size_t budget,
                                        bool& truncated) {
  std::vector<Element> out;
  std::unordered_set<std::string> seen;
  std::size_t pairs = 0;
  for (int total = 2; total <= max_length; ++total)
    for (const auto& a : elems)
      for (const auto& b : elems) {
        if (a.cost + b.cost != total) continue;
        if (++pairs > budget) {
          truncated = true;
          return out;
        }
        const Matrix m = a.word.matrix * b.word.matrix * a.inverse * b.inverse;
        if (m.is_identity() || !seen.insert(m.key()).second) continue;
        std::vector<Letter> letters = a.word.letters;
        letters.insert(letters.end(), b.word.letters.begin(), b.word.letters.end());
        const Word ai = inverse_word(a), bi = inverse_word(b);
        letters.insert(letters.end(), ai.letters.begin(), ai.letters.end());
        letters.insert(letters.end(), bi.letters.begin(), bi.letters.end());
        Matrix inv = b.word.matrix * a.word.matrix * b.inverse * a.inverse;
        out.push_back({Word{free_reduce(std::move(letters)), m}, std::move(inv), total});
      }
  return out;
}

}  // namespace

DerivedSeries derived_series(const GeneratorSet& gens, int depth, int max_length, std::size_t pair_budget) {
  if (depth < 1) throw ParameterError("derived series depth must be at least 1");
  if (max_length < 1) throw ParameterError("sampling length must be at least 1");
  DerivedSeries out;
  out.sampling_length = max_length;
  bool truncated = false;
  std::vector<Element> current = word_elements(gens, max_length - 1, pair_budget, truncated);
  for (int level = 0; level < depth; ++level) {
    DerivedLevel next;
    current = sample_commutators(current, max_length, pair_budget, truncated);
    for (const auto& e : current) next.generators.push_back(e.word);
    next.truncated = truncated;
    out.levels.push_back(std::move(next));
  }
  return out;
}

UnipotencyAudit unipotency_audit(const GeneratorSet& gens, int max_length, std::size_t budget) {
  if (max_length < 1) throw ParameterError("sampling length must be at least 1");
  UnipotencyAudit out;
  bool truncated = false;
  const auto elems = word_elements(gens, max_length - 1, budget, truncated);
  const auto comms = sample_commutators(elems, max_length, budget, truncated);
  const auto check = [&](const Word& w) {
    ++out.checked;
    if (is_unipotent(w.matrix)) return true;
    out.pass = false;
    out.counterexample = w;
    out.counterexample_char_poly = char_poly(w.matrix);
    return false;
  };
  for (const auto& c : comms)
    if (!check(c.word)) {
      out.truncated = truncated;
      return out;
    }
  std::unordered_set<std::string> seen;
  for (const auto& c : comms) seen.insert(c.word.matrix.key());
  std::size_t pairs = 0;
  for (int total = 4; total <= max_length && !truncated; ++total)
    for (const auto& a : comms)
      for (const auto& b : comms) {
        if (a.cost + b.cost != total) continue;
        if (++pairs > budget) {
          truncated = true;
          break;
        }
        const Word p = gens.multiply(a.word, b.word);
        if (p.matrix.is_identity() || !seen.insert(p.matrix.key()).second) continue;
        if (!check(p)) {
          out.truncated = truncated;
          return out;
        }
      }
  out.truncated = truncated;
  return out;
}

ConnectedReduction connected_reduction(const GeneratorSet& gens, long long cap) {
  ConnectedReduction out;
  std::vector<AutomorphismAction> actions;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Matrix& g = gens.matrices()[i];
    PoweredGenerator pg;
    pg.index = i;
    std::vector<unsigned long> orders;
    for (const auto& [k, mult] : cyclotomic_factorization(char_poly(g)).factors)
      if (k > 1) orders.push_back(k);
    const Matrix ratio = Matrix::kronecker(g, g.inverse().transpose());
    for (const auto& [k, mult] : cyclotomic_factorization(char_poly(ratio)).factors)
      if (k > 1) orders.push_back(k);
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    pg.torsion_orders = orders;
    long long m = 1;
    for (auto k : orders) {
      m = std::lcm(m, static_cast<long long>(k));
      if (m > cap) break;
    }
    if (m <= cap && count_negative_real_roots(char_poly(g.pow(m))) > 0) m *= 2;
    if (m > cap) {
      pg.capped = true;
      m = 1;
      out.warnings.push_back("generator " + gens.names()[i] + ": torsion order exceeds cap " + std::to_string(cap) +
                             ", passed through unchanged");
    }
    pg.power = m;
    AutomorphismAction action = gens.actions()[i];
    if (m != 1) {
      action.name += "^" + std::to_string(m);
      for (auto& piece : action.pieces) piece = piece.pow(m);
    }
    actions.push_back(std::move(action));
    out.powers.push_back(pg);
  }
  out.generators = GeneratorSet(std::move(actions));
  return out;
}

}  // namespace kdyn

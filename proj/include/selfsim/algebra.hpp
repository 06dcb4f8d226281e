#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "selfsim/group.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

/// Finitely supported real-coefficient element of the group algebra.
/// Terms that represent the same group element are merged on insertion; the
/// representative kept is the length-lexicographically smallest reduced word.
class AlgebraElement {
 public:
  struct Term {
    GroupWord word;
    double coef = 0.0;
  };

  AlgebraElement() = default;

  AlgebraElement& add(const GroupWord& word, double coef) {
    GroupWord r = reduce(word);
    for (auto& t : terms_) {
      if (same_element(t.word, r)) {
        t.coef += coef;
        if (r < t.word) t.word = std::move(r);
        return *this;
      }
    }
    terms_.push_back({std::move(r), coef});
    return *this;
  }

  AlgebraElement& add(std::string_view word, double coef) { return add(GroupWord::parse(word), coef); }

  /// All stored terms, including ones whose coefficients cancelled to zero.
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Terms with nonzero coefficient.
  std::vector<Term> support() const {
    std::vector<Term> out;
    for (const auto& t : terms_)
      if (t.coef != 0.0) out.push_back(t);
    return out;
  }

  double coefficient(const GroupWord& word) const {
    for (const auto& t : terms_)
      if (same_element(t.word, word)) return t.coef;
    return 0.0;
  }

  /// m(g) = m(g⁻¹) for every g; with real coefficients this makes every
  /// unitary image self-adjoint.
  bool is_symmetric() const {
    for (const auto& t : support())
      if (coefficient(t.word.inverse()) != t.coef) return false;
    return true;
  }

  /// Letters that occur in the support.
  std::vector<Gen> letters() const {
    std::vector<Gen> out;
    for (const auto& t : support())
      for (Gen g : t.word.letters())
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
  }

  static AlgebraElement identity(double coef = 1.0) { return AlgebraElement().add(GroupWord{}, coef); }

  /// Δ = ¼(a + b + c + d).
  static AlgebraElement delta() {
    AlgebraElement m;
    for (Gen g : kGenerators) m.add(GroupWord::single(g), 0.25);
    return m;
  }

  /// a + b + c + d.
  static AlgebraElement generator_sum() {
    AlgebraElement m;
    for (Gen g : kGenerators) m.add(GroupWord::single(g), 1.0);
    return m;
  }

  /// Q(α, β) = −α·a + b + c + d − (β + 1)·e.
  static AlgebraElement q_param(double alpha, double beta) {
    AlgebraElement m;
    m.add("a", -alpha).add("b", 1.0).add("c", 1.0).add("d", 1.0).add(GroupWord{}, -(beta + 1.0));
    return m;
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace selfsim

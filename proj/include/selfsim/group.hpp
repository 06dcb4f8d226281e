#pragma once

// The Grigorchuk group as automorphisms of the binary rooted tree, defined by
// the wreath recursion
//
//   a = σ·(e, e),   b = (a, c),   c = (a, d),   d = (e, b).
//
// Everything here is exact and pure.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "selfsim/error.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

struct WreathDecomposition {
  RootPerm perm = RootPerm::identity;
  GroupWord section0;
  GroupWord section1;

  const GroupWord& section(int bit) const { return bit == 0 ? section0 : section1; }

  friend bool operator==(const WreathDecomposition&, const WreathDecomposition&) = default;
};

namespace detail {

// Automaton state of a single generator while it reads a vertex top-down.
enum class State : std::uint8_t { a, b, c, d, trivial };

inline State state_of(Gen g) { return static_cast<State>(g); }

// One transition: returns the output bit and moves to the section below.
inline int step(State& s, int bit) {
  switch (s) {
    case State::a: s = State::trivial; return 1 - bit;
    case State::b: s = bit == 0 ? State::a : State::c; return bit;
    case State::c: s = bit == 0 ? State::a : State::d; return bit;
    case State::d: s = bit == 0 ? State::trivial : State::b; return bit;
    case State::trivial: return bit;
  }
  return bit;
}

inline void act_generator_in_place(Gen g, std::vector<std::uint8_t>& bits) {
  State s = state_of(g);
  for (auto& bit : bits) {
    if (s == State::trivial) return;
    bit = static_cast<std::uint8_t>(step(s, bit));
  }
}

inline BoundaryPoint act_generator(Gen g, const BoundaryPoint& x) {
  State s = state_of(g);
  std::vector<std::uint8_t> out;
  const auto& pre = x.preperiod();
  const auto& per = x.period();
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (s == State::trivial) {
      out.insert(out.end(), pre.begin() + static_cast<std::ptrdiff_t>(i), pre.end());
      return BoundaryPoint(std::move(out), per);
    }
    out.push_back(static_cast<std::uint8_t>(step(s, pre[i])));
  }
  // Five automaton states, so the state at period boundaries repeats quickly.
  std::map<State, std::size_t> seen;
  while (true) {
    if (s == State::trivial) return BoundaryPoint(std::move(out), per);
    if (auto it = seen.find(s); it != seen.end()) {
      std::vector<std::uint8_t> head(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(it->second));
      std::vector<std::uint8_t> cycle(out.begin() + static_cast<std::ptrdiff_t>(it->second), out.end());
      return BoundaryPoint(std::move(head), std::move(cycle));
    }
    seen.emplace(s, out.size());
    for (auto bit : per) out.push_back(static_cast<std::uint8_t>(step(s, bit)));
  }
}

inline Gen third_of(Gen x, Gen y) { return static_cast<Gen>(6 - static_cast<int>(x) - static_cast<int>(y)); }

inline bool in_klein(Gen g) { return g != Gen::a; }

}  // namespace detail

/// Free reduction with a² = b² = c² = d² = e and the Klein four-group table
/// on {b, c, d}. The result alternates between a and letters of {b, c, d}.
inline GroupWord reduce(const GroupWord& w) {
  std::vector<Gen> stack;
  stack.reserve(w.size());
  for (Gen g : w.letters()) {
    while (true) {
      if (stack.empty()) {
        stack.push_back(g);
        break;
      }
      Gen top = stack.back();
      if (top == g) {
        stack.pop_back();
        break;
      }
      if (detail::in_klein(top) && detail::in_klein(g)) {
        stack.pop_back();
        g = detail::third_of(top, g);
        continue;
      }
      stack.push_back(g);
      break;
    }
  }
  return GroupWord(std::move(stack));
}

inline WreathDecomposition generator_decomposition(Gen g) {
  switch (g) {
    case Gen::a: return {RootPerm::swap, {}, {}};
    case Gen::b: return {RootPerm::identity, GroupWord::single(Gen::a), GroupWord::single(Gen::c)};
    case Gen::c: return {RootPerm::identity, GroupWord::single(Gen::a), GroupWord::single(Gen::d)};
    case Gen::d: return {RootPerm::identity, {}, GroupWord::single(Gen::b)};
  }
  return {};
}

/// Level-1 decomposition of w (rightmost letter acts first). Sections are the
/// unreduced concatenations of the generator sections.
inline WreathDecomposition wreath_decompose(const GroupWord& w) {
  WreathDecomposition out;
  for (int start = 0; start < 2; ++start) {
    std::vector<Gen> pieces;  // collected right to left
    int bit = start;
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
      const auto dec = generator_decomposition(*it);
      const auto& sec = dec.section(bit);
      pieces.insert(pieces.end(), sec.letters().rbegin(), sec.letters().rend());
      bit = apply(dec.perm, bit);
    }
    GroupWord section(std::vector<Gen>(pieces.rbegin(), pieces.rend()));
    (start == 0 ? out.section0 : out.section1) = std::move(section);
  }
  for (Gen g : w.letters()) out.perm = out.perm * generator_decomposition(g).perm;
  return out;
}

/// Word problem by contraction. After reduction a word of length ≥ 2 has
/// strictly shorter sections, so the recursion terminates.
inline bool is_identity(const GroupWord& w) {
  const GroupWord r = reduce(w);
  if (r.empty()) return true;
  if (r.size() == 1) return false;
  const auto dec = wreath_decompose(r);
  if (dec.perm != RootPerm::identity) return false;
  return is_identity(dec.section0) && is_identity(dec.section1);
}

/// True iff u and v represent the same group element.
inline bool same_element(const GroupWord& u, const GroupWord& v) { return is_identity(u.inverse() * v); }

/// Image of a vertex; the level is preserved.
inline Vertex act_vertex(const GroupWord& w, Vertex v) {
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) detail::act_generator_in_place(*it, v.bits());
  return v;
}

/// Exact image of an eventually periodic boundary point.
inline BoundaryPoint act_boundary(const GroupWord& w, BoundaryPoint x) {
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) x = detail::act_generator(*it, x);
  return x;
}

inline Vertex act_boundary_prefix(const GroupWord& w, const BoundaryPoint& x, std::size_t n) {
  return act_vertex(w, x.prefix(n));
}

/// Reduced section of w at vertex v.
inline GroupWord section_at(const GroupWord& w, const Vertex& v) {
  GroupWord s = reduce(w);
  for (auto bit : v.bits()) s = reduce(wreath_decompose(s).section(bit));
  return s;
}

/// Number of nontrivial sections of w at the vertices of level n. Trivial
/// sections have trivial subsections, so only nontrivial ones are expanded.
inline std::size_t activity_count(const GroupWord& w, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be nonnegative");
  std::vector<GroupWord> frontier;
  if (!is_identity(w)) frontier.push_back(reduce(w));
  for (int level = 0; level < n && !frontier.empty(); ++level) {
    std::vector<GroupWord> next;
    next.reserve(frontier.size() * 2);
    for (const auto& s : frontier) {
      const auto dec = wreath_decompose(s);
      for (int bit = 0; bit < 2; ++bit) {
        GroupWord sec = reduce(dec.section(bit));
        if (!is_identity(sec)) next.push_back(std::move(sec));
      }
    }
    frontier = std::move(next);
  }
  return frontier.size();
}

struct SubexpSample {
  bool bounded = false;
  std::vector<double> trace;  // k_n(w)·γⁿ for n = 0..N
};

/// Finite-sample evidence (not a proof) that k_n(w)·γⁿ → 0: the trace must be
/// non-increasing over the second half of the window and end strictly below
/// its maximum, or vanish identically there.
inline SubexpSample is_subexp_bounded_sample(const GroupWord& w, double gamma, int max_level) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::InvalidArgument, "gamma must lie in (0,1)");
  if (max_level < 1) throw Error(ErrorKind::InvalidArgument, "max level must be at least 1");
  SubexpSample out;
  out.trace.reserve(static_cast<std::size_t>(max_level) + 1);
  for (int n = 0; n <= max_level; ++n)
    out.trace.push_back(static_cast<double>(activity_count(w, n)) * std::pow(gamma, n));
  const std::size_t tail = static_cast<std::size_t>(max_level) / 2;
  bool monotone = true;
  for (std::size_t i = tail + 1; i < out.trace.size(); ++i) monotone = monotone && out.trace[i] <= out.trace[i - 1];
  double peak = 0.0;
  for (double v : out.trace) peak = std::max(peak, v);
  out.bounded = monotone && (out.trace.back() == 0.0 || out.trace.back() < peak);
  return out;
}

struct Rigidity {
  std::optional<int> rigid_at;  // least n with trivial section along prefix(x, n)
  int searched = 0;

  bool rigid() const noexcept { return rigid_at.has_value(); }
};

inline Rigidity rigidity_depth(const BoundaryPoint& x, const GroupWord& w, int max_depth) {
  if (max_depth < 1) throw Error(ErrorKind::InvalidArgument, "max_depth must be at least 1");
  Rigidity out{std::nullopt, max_depth};
  GroupWord s = reduce(w);
  for (int n = 1; n <= max_depth; ++n) {
    s = reduce(wreath_decompose(s).section(x.bit(static_cast<std::size_t>(n - 1))));
    if (is_identity(s)) {
      out.rigid_at = n;
      return out;
    }
  }
  return out;
}

/// Reduced words of length ≤ max_len in length-lexicographic order.
inline std::vector<GroupWord> reduced_words(int max_len) {
  std::vector<GroupWord> out{GroupWord{}};
  std::vector<GroupWord> layer{GroupWord{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<GroupWord> next;
    for (const auto& w : layer) {
      for (Gen g : kGenerators) {
        if (!w.empty() && detail::in_klein(w.letters().back()) == detail::in_klein(g)) continue;
        next.push_back(w * GroupWord::single(g));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// Numeration s_1 = e, s_2, … of the group elements represented by reduced
/// words of length ≤ max_len: length-lexicographic order, first representative
/// of each element kept.
inline std::vector<GroupWord> enumerate_elements(int max_len) {
  std::vector<GroupWord> out;
  for (auto& w : reduced_words(max_len)) {
    bool fresh = true;
    for (const auto& seen : out) {
      if (same_element(seen, w)) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace selfsim

#pragma once

// Value types for the Grigorchuk group acting on the binary rooted tree:
// generator letters, group words, tree vertices and eventually periodic
// boundary points, with their plain-string serializations.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/error.hpp"

namespace selfsim {

enum class Gen : std::uint8_t { a = 0, b = 1, c = 2, d = 3 };

inline constexpr Gen kGenerators[] = {Gen::a, Gen::b, Gen::c, Gen::d};

inline char to_char(Gen g) { return static_cast<char>('a' + static_cast<int>(g)); }

inline Gen gen_from_char(char ch) {
  if (ch < 'a' || ch > 'd') throw Error(ErrorKind::Parse, std::string("not a generator letter: '") + ch + "'");
  return static_cast<Gen>(ch - 'a');
}

/// Root permutation of a tree automorphism.
enum class RootPerm : std::uint8_t { identity = 0, swap = 1 };

inline RootPerm operator*(RootPerm lhs, RootPerm rhs) {
  return static_cast<RootPerm>(static_cast<std::uint8_t>(lhs) ^ static_cast<std::uint8_t>(rhs));
}

inline int apply(RootPerm p, int bit) { return p == RootPerm::swap ? 1 - bit : bit; }

/// A word over {a,b,c,d}. The empty word is the identity. Letters compose as
/// functions: the rightmost letter acts first.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<Gen> letters) : letters_(std::move(letters)) {}

  /// Accepts a string over "abcd"; "" and "e" both denote the identity.
  static GroupWord parse(std::string_view text) {
    if (text == "e") return {};
    std::vector<Gen> letters;
    letters.reserve(text.size());
    for (char ch : text) letters.push_back(gen_from_char(ch));
    return GroupWord(std::move(letters));
  }

  static GroupWord single(Gen g) { return GroupWord({g}); }

  const std::vector<Gen>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Gen operator[](std::size_t i) const { return letters_[i]; }

  /// Serialization over "abcd"; the identity serializes as "".
  std::string str() const {
    std::string out;
    out.reserve(letters_.size());
    for (Gen g : letters_) out.push_back(to_char(g));
    return out;
  }

  /// Human-readable form; the identity prints as "e".
  std::string display() const { return empty() ? std::string("e") : str(); }

  /// Every generator is an involution, so the inverse is the reversed word.
  GroupWord inverse() const { return GroupWord(std::vector<Gen>(letters_.rbegin(), letters_.rend())); }

  GroupWord& operator*=(const GroupWord& rhs) {
    letters_.insert(letters_.end(), rhs.letters_.begin(), rhs.letters_.end());
    return *this;
  }
  friend GroupWord operator*(GroupWord lhs, const GroupWord& rhs) { return lhs *= rhs; }

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

  /// Length-lexicographic order (a < b < c < d).
  friend std::strong_ordering operator<=>(const GroupWord& lhs, const GroupWord& rhs) {
    if (auto cmp = lhs.size() <=> rhs.size(); cmp != 0) return cmp;
    return lhs.letters_ <=> rhs.letters_;
  }

 private:
  std::vector<Gen> letters_;
};

/// Vertex of level n: a bit string of length n, the empty string is the root.
class Vertex {
 public:
  Vertex() = default;
  explicit Vertex(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static Vertex parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw Error(ErrorKind::Parse, std::string("not a bit: '") + ch + "'");
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return Vertex(std::move(bits));
  }

  /// Vertex of level `level` whose first bit is the most significant bit of `index`.
  static Vertex from_index(int level, std::uint64_t index) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(level));
    for (int i = level - 1; i >= 0; --i) {
      bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(index & 1U);
      index >>= 1U;
    }
    return Vertex(std::move(bits));
  }

  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (auto bit : bits_) idx = (idx << 1U) | bit;
    return idx;
  }

  int level() const noexcept { return static_cast<int>(bits_.size()); }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::vector<std::uint8_t>& bits() noexcept { return bits_; }

  bool is_prefix_of(const Vertex& other) const {
    return bits_.size() <= other.bits_.size() && std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
  }

  std::string str() const {
    std::string out;
    out.reserve(bits_.size());
    for (auto bit : bits_) out.push_back(static_cast<char>('0' + bit));
    return out;
  }

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Eventually periodic point preperiod·period·period·… of the boundary.
/// Stored in normal form (primitive period, shortest preperiod), so equality
/// of values is equality of the represented sequences.
class BoundaryPoint {
 public:
  BoundaryPoint() : period_{0} {}

  BoundaryPoint(std::vector<std::uint8_t> preperiod, std::vector<std::uint8_t> period)
      : preperiod_(std::move(preperiod)), period_(std::move(period)) {
    if (period_.empty()) throw Error(ErrorKind::InvalidArgument, "boundary point needs a nonempty period");
    for (auto bit : preperiod_)
      if (bit > 1) throw Error(ErrorKind::InvalidArgument, "boundary bits must be 0 or 1");
    for (auto bit : period_)
      if (bit > 1) throw Error(ErrorKind::InvalidArgument, "boundary bits must be 0 or 1");
    normalize();
  }

  /// Parses "preperiod(period)", e.g. "01(1)" for 0111….
  static BoundaryPoint parse(std::string_view text) {
    auto open = text.find('(');
    if (open == std::string_view::npos || text.empty() || text.back() != ')')
      throw Error(ErrorKind::Parse, "boundary point must look like 'bits(bits)': " + std::string(text));
    auto pre = Vertex::parse(text.substr(0, open));
    auto per = Vertex::parse(text.substr(open + 1, text.size() - open - 2));
    if (per.level() == 0) throw Error(ErrorKind::Parse, "empty period in " + std::string(text));
    return BoundaryPoint(pre.bits(), per.bits());
  }

  static BoundaryPoint constant(std::uint8_t bit) { return BoundaryPoint({}, {bit}); }

  std::uint8_t bit(std::size_t i) const {
    if (i < preperiod_.size()) return preperiod_[i];
    return period_[(i - preperiod_.size()) % period_.size()];
  }

  Vertex prefix(std::size_t n) const {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = bit(i);
    return Vertex(std::move(bits));
  }

  const std::vector<std::uint8_t>& preperiod() const noexcept { return preperiod_; }
  const std::vector<std::uint8_t>& period() const noexcept { return period_; }

  std::string str() const {
    return Vertex(preperiod_).str() + "(" + Vertex(period_).str() + ")";
  }

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
  friend auto operator<=>(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  void normalize() {
    const std::size_t len = period_.size();
    for (std::size_t p = 1; p < len; ++p) {
      if (len % p != 0) continue;
      bool primitive_divisor = true;
      for (std::size_t i = p; i < len && primitive_divisor; ++i) primitive_divisor = period_[i] == period_[i - p];
      if (primitive_divisor) {
        period_.resize(p);
        break;
      }
    }
    while (!preperiod_.empty() && preperiod_.back() == period_.back()) {
      preperiod_.pop_back();
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    }
  }

  std::vector<std::uint8_t> preperiod_;
  std::vector<std::uint8_t> period_;
};

}  // namespace selfsim

template <>
struct std::hash<selfsim::GroupWord> {
  std::size_t operator()(const selfsim::GroupWord& w) const noexcept { return std::hash<std::string>{}(w.str()); }
};

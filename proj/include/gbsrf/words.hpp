#pragma once

// Free-group word algebra over an indexed alphabet.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gbsrf/error.hpp"

namespace gbsrf {

using Generator = std::uint32_t;

/// A generator or its formal inverse. Letters are totally ordered by
/// generator index first, then positive before negative.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(Generator gen, int sign)
      : code_(2 * gen + (sign < 0 ? 1u : 0u)) {}

  static constexpr Letter from_code(std::uint32_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  constexpr Generator gen() const noexcept { return code_ >> 1; }
  constexpr int sign() const noexcept { return (code_ & 1u) ? -1 : 1; }
  constexpr std::uint32_t code() const noexcept { return code_; }
  constexpr Letter inverse() const noexcept { return from_code(code_ ^ 1u); }

  constexpr auto operator<=>(Letter const&) const = default;

 private:
  std::uint32_t code_ = 0;
};

using Word = std::vector<Letter>;

struct WordHash {
  std::size_t operator()(std::span<Letter const> w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Letter l : w) {
      h ^= l.code();
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
  std::size_t operator()(Word const& w) const noexcept {
    return (*this)(std::span<Letter const>(w));
  }
};

inline Word inverse(std::span<Letter const> w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

inline Word concat(std::span<Letter const> a, std::span<Letter const> b) {
  Word out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Appends `l` to a reduced word, cancelling if it meets its inverse.
inline void push_reduced(Word& w, Letter l) {
  if (!w.empty() && w.back() == l.inverse()) {
    w.pop_back();
  } else {
    w.push_back(l);
  }
}

inline Word free_reduce(std::span<Letter const> w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) push_reduced(out, l);
  return out;
}

inline bool is_reduced(std::span<Letter const> w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == w[i - 1].inverse()) return false;
  }
  return true;
}

inline bool is_cyclically_reduced(std::span<Letter const> w) {
  return is_reduced(w) &&
         (w.size() < 2 || w.front() != w.back().inverse());
}

/// `w^e` for a word that is cyclically reduced; the result is reduced.
inline Word power(std::span<Letter const> w, long e) {
  Word out;
  if (e == 0 || w.empty()) return out;
  Word base = e > 0 ? Word(w.begin(), w.end()) : inverse(w);
  unsigned long count = e > 0 ? static_cast<unsigned long>(e)
                              : static_cast<unsigned long>(-(e + 1)) + 1;
  out.reserve(base.size() * count);
  for (unsigned long i = 0; i < count; ++i) {
    out.insert(out.end(), base.begin(), base.end());
  }
  return out;
}

struct CyclicReduction {
  Word core;
  Word conjugator;
};

/// Splits `w` as conjugator · core · conjugator⁻¹ (freely) with a cyclically
/// reduced core. A trivial core always comes with an empty conjugator.
inline CyclicReduction cyclic_reduce(std::span<Letter const> w) {
  Word r = free_reduce(w);
  std::size_t i = 0;
  std::size_t j = r.size();
  while (j - i >= 2 && r[i] == r[j - 1].inverse()) {
    ++i;
    --j;
  }
  CyclicReduction out;
  out.core.assign(r.begin() + static_cast<std::ptrdiff_t>(i),
                  r.begin() + static_cast<std::ptrdiff_t>(j));
  if (!out.core.empty()) {
    out.conjugator.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

/// Index of the lexicographically least rotation (Booth's algorithm).
inline std::size_t least_rotation(std::span<Letter const> w) {
  std::size_t const n = w.size();
  if (n == 0) return 0;
  std::vector<long> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter const sj = w[j % n];
    long i = fail[j - k - 1];
    while (i != -1 && sj != w[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < w[(k + static_cast<std::size_t>(i) + 1) % n]) {
        k = j - static_cast<std::size_t>(i) - 1;
      }
      i = fail[static_cast<std::size_t>(i)];
    }
    if (sj != w[(k + static_cast<std::size_t>(i) + 1) % n]) {
      // i == -1 here
      if (sj < w[k % n]) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

inline Word rotate(std::span<Letter const> w, std::size_t k) {
  Word out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(w[(k + i) % w.size()]);
  return out;
}

/// Smallest period p of `w` with p dividing |w| (KMP border).
inline std::size_t primitive_period(std::span<Letter const> w) {
  std::size_t const n = w.size();
  if (n == 0) return 0;
  std::vector<std::size_t> border(n + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    while (k > 0 && w[i] != w[k]) k = border[k];
    if (w[i] == w[k]) ++k;
    border[i + 1] = k;
  }
  std::size_t p = n - border[n];
  return (n % p == 0) ? p : n;
}

struct PrimitiveRoot {
  Word root;
  long exponent = 0;
};

/// Root and exponent of the cyclic core of `w`.
inline PrimitiveRoot primitive_root(std::span<Letter const> w) {
  Word core = cyclic_reduce(w).core;
  if (core.empty()) {
    throw Error(ErrorKind::TrivialWord, "word is trivial in the free group");
  }
  std::size_t p = primitive_period(core);
  PrimitiveRoot out;
  out.exponent = static_cast<long>(core.size() / p);
  core.resize(p);
  out.root = std::move(core);
  return out;
}

struct CanonicalClass;
inline CanonicalClass canonical_class(std::span<Letter const> w);

/// A nonempty cyclically reduced word stored in canonical rotation: the least
/// rotation of itself or of its inverse, whichever is smaller.
class CyclicWord {
 public:
  CyclicWord() = default;

  std::span<Letter const> letters() const noexcept { return letters_; }
  Word const& word() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool is_primitive() const { return primitive_period(letters_) == letters_.size(); }

  bool operator==(CyclicWord const&) const = default;

 private:
  friend CanonicalClass canonical_class(std::span<Letter const> w);
  explicit CyclicWord(Word w) : letters_(std::move(w)) {}
  Word letters_;
};

struct CanonicalClass {
  CyclicWord rep;
  int sign = 1;
};

/// Canonical representative of the conjugacy-and-inversion class of the
/// cyclic core of `w`. sign is +1 when the core is conjugate to `rep`, -1 when
/// it is conjugate to `rep`⁻¹; words conjugate to their own inverse get +1.
inline CanonicalClass canonical_class(std::span<Letter const> w) {
  Word core = cyclic_reduce(w).core;
  if (core.empty()) {
    throw Error(ErrorKind::TrivialWord, "word is trivial in the free group");
  }
  Word fwd = rotate(core, least_rotation(core));
  Word inv = inverse(core);
  Word bwd = rotate(inv, least_rotation(inv));
  if (bwd < fwd) return CanonicalClass{CyclicWord(std::move(bwd)), -1};
  return CanonicalClass{CyclicWord(std::move(fwd)), 1};
}

inline bool are_conjugate(std::span<Letter const> u, std::span<Letter const> v) {
  Word cu = cyclic_reduce(u).core;
  Word cv = cyclic_reduce(v).core;
  if (cu.size() != cv.size()) return false;
  if (cu.empty()) return true;
  return rotate(cu, least_rotation(cu)) == rotate(cv, least_rotation(cv));
}

/// Exponent e with x = base^e in the free group, if any. `x` must be reduced
/// and `base` nonempty and cyclically reduced.
inline std::optional<long> power_of(std::span<Letter const> x,
                                    std::span<Letter const> base) {
  if (x.empty()) return 0L;
  std::size_t const p = base.size();
  if (p == 0 || x.size() % p != 0) return std::nullopt;
  long const reps = static_cast<long>(x.size() / p);
  bool fwd = true;
  for (std::size_t i = 0; i < x.size() && fwd; ++i) fwd = x[i] == base[i % p];
  if (fwd) return reps;
  // base^{-1} read forward is inverse letters of base in reverse order
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != base[p - 1 - (i % p)].inverse()) return std::nullopt;
  }
  return -reps;
}

/// Returns e when x = base^e freely and `modulus` divides e.
inline std::optional<long> power_in_cyclic(std::span<Letter const> x,
                                           CyclicWord const& base, long modulus) {
  if (!base.is_primitive()) {
    throw Error(ErrorKind::NonPrimitiveBase, "base word is a proper power");
  }
  if (modulus == 0) {
    throw Error(ErrorKind::ContractViolation, "modulus must be nonzero");
  }
  Word rx = free_reduce(x);
  auto e = power_of(rx, base.letters());
  if (!e || *e % modulus != 0) return std::nullopt;
  return e;
}

/// Names of the generators of an alphabet, indexed by Generator.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) {
    for (auto& n : names) add(std::move(n));
  }

  /// Returns false if the name already exists.
  bool add(std::string name) {
    auto [it, inserted] = index_.emplace(name, static_cast<Generator>(names_.size()));
    if (!inserted) return false;
    names_.push_back(std::move(name));
    return true;
  }

  std::optional<Generator> find(std::string const& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string const& name(Generator g) const { return names_.at(g); }
  std::size_t size() const noexcept { return names_.size(); }
  std::vector<std::string> const& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Generator> index_;
};

/// Prints runs of a letter as powers: "a^2 t a^-1". The empty word prints as
/// "1".
inline std::string format_word(std::span<Letter const> w, Alphabet const& alpha) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long e = static_cast<long>(j - i) * w[i].sign();
    if (!out.empty()) out += ' ';
    out += alpha.name(w[i].gen());
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

}  // namespace gbsrf

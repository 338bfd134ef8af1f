#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fibspec {

enum class Letter : std::uint8_t { a = 0, b = 1 };

char to_char(Letter l);

/// Finite word over {a, b}, stored one byte per letter.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  /// Parses a string of 'a'/'b' characters; throws std::invalid_argument on
  /// any other character.
  static Word parse(std::string_view text);

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  const std::vector<Letter>& letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  std::string str() const;

  bool operator==(const Word&) const = default;

private:
  std::vector<Letter> letters_;
};

inline constexpr std::size_t kDefaultWordCap = 10'000'000;

/// Letterwise image under a -> ab, b -> a.
Word substitute(const Word& w);

/// Length of S^n(a): F_{n+1} with F_1 = 1, F_2 = 2. Saturates at SIZE_MAX.
std::size_t fibonacci_word_length(unsigned n);

/// S^n(a). Throws std::length_error when the result would exceed `cap`
/// letters.
Word fibonacci_word(unsigned n, std::size_t cap = kDefaultWordCap);

/// True iff `w` is a contiguous subword of S^depth(a). Requires
/// |S^depth(a)| >= 2|w|, otherwise std::invalid_argument.
bool is_factor_of_u(const Word& w, unsigned search_depth,
                    std::size_t cap = kDefaultWordCap);

}  // namespace fibspec

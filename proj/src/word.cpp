#include "fibspec/word.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fibspec {

char to_char(Letter l) { return l == Letter::a ? 'a' : 'b'; }

Word Word::parse(std::string_view text) {
  std::vector<Letter> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == 'a') {
      out.push_back(Letter::a);
    } else if (c == 'b') {
      out.push_back(Letter::b);
    } else {
      throw std::invalid_argument(std::string("word: invalid letter '") + c + "'");
    }
  }
  return Word(std::move(out));
}

std::string Word::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(to_char(l));
  return s;
}

Word substitute(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.length() * 2);
  for (Letter l : w) {
    out.push_back(Letter::a);
    if (l == Letter::a) out.push_back(Letter::b);
  }
  return Word(std::move(out));
}

std::size_t fibonacci_word_length(unsigned n) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t prev = 1;  // |S^{-1}(a)| = |b|
  std::size_t cur = 1;   // |S^0(a)|
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t next = cur > kMax - prev ? kMax : cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Word fibonacci_word(unsigned n, std::size_t cap) {
  const std::size_t len = fibonacci_word_length(n);
  if (len > cap) {
    throw std::length_error("fibonacci_word: S^" + std::to_string(n) + "(a) has " +
                            std::to_string(len) + " letters, cap is " +
                            std::to_string(cap));
  }
  // S^{k+1}(a) = S^k(a) S^{k-1}(a): since S^{k-1}(a) is a prefix of S^k(a),
  // each step appends a prefix of the current buffer.
  std::vector<Letter> buf;
  buf.reserve(len);
  buf.push_back(Letter::a);
  std::size_t prev_len = 1;  // |S^{-1}(a)| = |b|; handled specially below
  for (unsigned k = 0; k < n; ++k) {
    const std::size_t cur_len = buf.size();
    if (k == 0) {
      buf.push_back(Letter::b);
    } else {
      for (std::size_t i = 0; i < prev_len; ++i) buf.push_back(buf[i]);
    }
    prev_len = cur_len;
  }
  return Word(std::move(buf));
}

bool is_factor_of_u(const Word& w, unsigned search_depth, std::size_t cap) {
  if (fibonacci_word_length(search_depth) < 2 * w.length()) {
    throw std::invalid_argument("is_factor_of_u: search depth " +
                                std::to_string(search_depth) +
                                " too small for a word of length " +
                                std::to_string(w.length()));
  }
  const Word u = fibonacci_word(search_depth, cap);
  return std::search(u.begin(), u.end(), w.begin(), w.end()) != u.end();
}

}  // namespace fibspec

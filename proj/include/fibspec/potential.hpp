#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fibspec/word.hpp"

namespace fibspec {

enum class PieceLabel { a, b, ab };

std::string to_string(PieceLabel label);
PieceLabel label_of(Letter l);

struct Cell {
  double width;
  double value;
};

/// Piecewise-constant potential on [0, length). Cell widths sum to the
/// length (relative tolerance 1e-12); all values finite.
class PotentialPiece {
public:
  /// Throws std::invalid_argument when the invariants do not hold.
  PotentialPiece(PieceLabel label, double length, std::vector<Cell> cells);

  PieceLabel label() const { return label_; }
  double length() const { return length_; }
  const std::vector<Cell>& cells() const { return cells_; }

  /// f(x) for 0 <= x < length; std::out_of_range otherwise.
  double evaluate(double x) const;

private:
  PieceLabel label_;
  double length_;
  std::vector<Cell> cells_;
};

/// f_ab = (f_a | f_b).
PotentialPiece make_ab(const PotentialPiece& pa, const PotentialPiece& pb);

PotentialPiece scale(const PotentialPiece& p, double lambda);

double l2_norm(const PotentialPiece& p);

/// Equal-width cells taking the tabulated values.
PotentialPiece sample_piece(std::span<const double> table, double length,
                            PieceLabel label = PieceLabel::a);

/// Endpoints s_n of a concatenation. `lengths[i]` is the length of piece
/// number i - origin, so the result holds s_{-origin}, ..., s_{size-origin}
/// with s_0 = 0 at index `origin`.
std::vector<double> concatenation_endpoints(std::span<const double> lengths,
                                            std::size_t origin = 0);

class ConcatenatedPotential {
public:
  /// One-sided concatenation starting at the origin. Throws
  /// std::invalid_argument if a letter of `word` has no piece.
  ConcatenatedPotential(Word word, std::map<Letter, PotentialPiece> pieces);

  const Word& word() const { return word_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const PotentialPiece& piece(Letter l) const { return pieces_.at(l); }
  double length() const { return breakpoints_.back(); }

  /// f(x) = f_n(x - s_n) for x in [s_n, s_{n+1}).
  double evaluate(double x) const;

private:
  Word word_;
  std::map<Letter, PotentialPiece> pieces_;
  std::vector<double> breakpoints_;
};

/// The pair (f_a, f_b) together with the coupling constant.
struct ModelSpec {
  PotentialPiece piece_a;
  PotentialPiece piece_b;
  double coupling = 1.0;

  /// Throws std::invalid_argument on wrong labels or a non-finite coupling.
  void validate() const;
};

/// f_a = chi_[0,1), f_b = 0 on [0,1).
ModelSpec chi_model(double coupling = 1.0);

/// f_a = f_b = 0 with the given lengths.
ModelSpec free_model(double length_a = 1.0, double length_b = 1.0);

}  // namespace fibspec

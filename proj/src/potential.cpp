#include "fibspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fibspec {

std::string to_string(PieceLabel label) {
  switch (label) {
    case PieceLabel::a: return "a";
    case PieceLabel::b: return "b";
    case PieceLabel::ab: return "ab";
  }
  return "?";
}

PieceLabel label_of(Letter l) { return l == Letter::a ? PieceLabel::a : PieceLabel::b; }

PotentialPiece::PotentialPiece(PieceLabel label, double length, std::vector<Cell> cells)
    : label_(label), length_(length), cells_(std::move(cells)) {
  if (!(std::isfinite(length_) && length_ > 0.0)) {
    throw std::invalid_argument("piece " + to_string(label_) + ": length must be positive");
  }
  if (cells_.empty()) {
    throw std::invalid_argument("piece " + to_string(label_) + ": no cells");
  }
  double total = 0.0;
  for (const Cell& c : cells_) {
    if (!(std::isfinite(c.width) && c.width > 0.0)) {
      throw std::invalid_argument("piece " + to_string(label_) + ": cell width must be positive");
    }
    if (!std::isfinite(c.value)) {
      throw std::invalid_argument("piece " + to_string(label_) + ": cell value must be finite");
    }
    total += c.width;
  }
  if (std::abs(total - length_) > 1e-12 * length_) {
    throw std::invalid_argument("piece " + to_string(label_) +
                                ": cell widths do not sum to the length");
  }
}

double PotentialPiece::evaluate(double x) const {
  if (!(x >= 0.0 && x < length_)) {
    throw std::out_of_range("piece " + to_string(label_) + ": position outside [0, length)");
  }
  double left = 0.0;
  for (const Cell& c : cells_) {
    if (x < left + c.width) return c.value;
    left += c.width;
  }
  // x lies in the rounding sliver between the summed widths and length_.
  return cells_.back().value;
}

PotentialPiece make_ab(const PotentialPiece& pa, const PotentialPiece& pb) {
  if (pa.label() != PieceLabel::a || pb.label() != PieceLabel::b) {
    throw std::invalid_argument("make_ab: expects pieces labelled a and b");
  }
  std::vector<Cell> cells = pa.cells();
  cells.insert(cells.end(), pb.cells().begin(), pb.cells().end());
  return PotentialPiece(PieceLabel::ab, pa.length() + pb.length(), std::move(cells));
}

PotentialPiece scale(const PotentialPiece& p, double lambda) {
  std::vector<Cell> cells = p.cells();
  for (Cell& c : cells) c.value *= lambda;
  return PotentialPiece(p.label(), p.length(), std::move(cells));
}

double l2_norm(const PotentialPiece& p) {
  double sum = 0.0;
  for (const Cell& c : p.cells()) sum += c.width * c.value * c.value;
  return std::sqrt(sum);
}

PotentialPiece sample_piece(std::span<const double> table, double length, PieceLabel label) {
  if (table.empty()) throw std::invalid_argument("sample_piece: empty table");
  if (!(length > 0.0)) throw std::invalid_argument("sample_piece: length must be positive");
  const double width = length / static_cast<double>(table.size());
  std::vector<Cell> cells;
  cells.reserve(table.size());
  for (double v : table) cells.push_back({width, v});
  return PotentialPiece(label, length, std::move(cells));
}

std::vector<double> concatenation_endpoints(std::span<const double> lengths,
                                            std::size_t origin) {
  if (origin > lengths.size()) {
    throw std::invalid_argument("concatenation_endpoints: origin past the last piece");
  }
  std::vector<double> s(lengths.size() + 1, 0.0);
  // s_n = sum_{j<n} l_j for n >= 1, s_n = -sum_{j=n}^{-1} l_j for n <= -1.
  for (std::size_t i = origin; i < lengths.size(); ++i) s[i + 1] = s[i] + lengths[i];
  for (std::size_t i = origin; i-- > 0;) s[i] = s[i + 1] - lengths[i];
  return s;
}

ConcatenatedPotential::ConcatenatedPotential(Word word, std::map<Letter, PotentialPiece> pieces)
    : word_(std::move(word)), pieces_(std::move(pieces)) {
  std::vector<double> lengths;
  lengths.reserve(word_.length());
  for (Letter l : word_) {
    auto it = pieces_.find(l);
    if (it == pieces_.end()) {
      throw std::invalid_argument(std::string("concatenate: no piece assigned to letter ") +
                                  to_char(l));
    }
    lengths.push_back(it->second.length());
  }
  breakpoints_ = concatenation_endpoints(lengths);
}

double ConcatenatedPotential::evaluate(double x) const {
  if (word_.empty() || !(x >= 0.0 && x < breakpoints_.back())) {
    throw std::out_of_range("concatenated potential: position outside the support");
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto n = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  const PotentialPiece& p = pieces_.at(word_[n]);
  return p.evaluate(std::min(x - breakpoints_[n], std::nextafter(p.length(), 0.0)));
}

void ModelSpec::validate() const {
  if (piece_a.label() != PieceLabel::a || piece_b.label() != PieceLabel::b) {
    throw std::invalid_argument("model: pieces must be labelled a and b");
  }
  if (!std::isfinite(coupling)) throw std::invalid_argument("model: coupling must be finite");
}

ModelSpec chi_model(double coupling) {
  return ModelSpec{PotentialPiece(PieceLabel::a, 1.0, {{1.0, 1.0}}),
                   PotentialPiece(PieceLabel::b, 1.0, {{1.0, 0.0}}), coupling};
}

ModelSpec free_model(double length_a, double length_b) {
  return ModelSpec{PotentialPiece(PieceLabel::a, length_a, {{length_a, 0.0}}),
                   PotentialPiece(PieceLabel::b, length_b, {{length_b, 0.0}}), 1.0};
}

}  // namespace fibspec

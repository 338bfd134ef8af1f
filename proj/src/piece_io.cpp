#include "fibspec/piece_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fibspec {

using nlohmann::json;

namespace {

double number_field(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError("field '" + where + "': expected a number");
  return j.get<double>();
}

}  // namespace

PotentialPiece parse_piece(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("piece file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("piece file: top level must be an object");

  if (!doc.contains("label") || !doc["label"].is_string()) {
    throw ConfigError("field 'label': missing or not a string");
  }
  const std::string label_text = doc["label"].get<std::string>();
  PieceLabel label;
  if (label_text == "a") {
    label = PieceLabel::a;
  } else if (label_text == "b") {
    label = PieceLabel::b;
  } else {
    throw ConfigError("field 'label': must be \"a\" or \"b\", got \"" + label_text + "\"");
  }

  if (!doc.contains("length")) throw ConfigError("field 'length': missing");
  const double length = number_field(doc["length"], "length");
  if (!(length > 0.0)) throw ConfigError("field 'length': must be positive");

  const bool has_cells = doc.contains("cells");
  const bool has_samples = doc.contains("samples");
  if (has_cells == has_samples) {
    throw ConfigError("fields 'cells'/'samples': exactly one must be present");
  }

  try {
    if (has_samples) {
      const json& s = doc["samples"];
      if (!s.is_array() || s.empty()) throw ConfigError("field 'samples': expected a nonempty array");
      std::vector<double> table;
      for (std::size_t i = 0; i < s.size(); ++i) {
        table.push_back(number_field(s[i], "samples[" + std::to_string(i) + "]"));
      }
      return sample_piece(table, length, label);
    }
    const json& c = doc["cells"];
    if (!c.is_array() || c.empty()) throw ConfigError("field 'cells': expected a nonempty array");
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string where = "cells[" + std::to_string(i) + "]";
      if (!c[i].is_array() || c[i].size() != 2) {
        throw ConfigError("field '" + where + "': expected [width, value]");
      }
      const double w = number_field(c[i][0], where + "[0]");
      if (!(w > 0.0)) throw ConfigError("field '" + where + "[0]': width must be positive");
      cells.push_back({w, number_field(c[i][1], where + "[1]")});
    }
    return PotentialPiece(label, length, std::move(cells));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(has_cells ? "field 'cells': " : "field 'samples': ") + e.what());
  }
}

PotentialPiece load_piece_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open piece file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_piece(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string piece_to_json(const PotentialPiece& p) {
  json cells = json::array();
  for (const Cell& c : p.cells()) cells.push_back({c.width, c.value});
  return json{{"label", to_string(p.label())}, {"length", p.length()}, {"cells", cells}}.dump();
}

}  // namespace fibspec

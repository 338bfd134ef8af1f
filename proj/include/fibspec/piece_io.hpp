#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "fibspec/potential.hpp"

namespace fibspec {

/// Malformed user input: bad piece file, bad flag value.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses a piece definition:
///   { "label": "a", "length": 1.0, "cells": [[width, value], ...] }
///   { "label": "a", "length": 1.0, "samples": [v0, v1, ...] }
/// Throws ConfigError naming the offending field.
PotentialPiece parse_piece(const std::string& json_text);

PotentialPiece load_piece_file(const std::filesystem::path& path);

std::string piece_to_json(const PotentialPiece& p);

}  // namespace fibspec

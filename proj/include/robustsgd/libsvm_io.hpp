#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>

#include "robustsgd/dataset.hpp"

namespace rsgd {

struct ParseError : std::runtime_error {
  ParseError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  size_t line;
};

// LIBSVM text format: `<label> <idx>:<val> <idx>:<val> ...` per line, labels
// in {+1, 1, -1}, strictly increasing indices. Blank lines and `#` comment
// suffixes are tolerated; duplicate or decreasing indices are rejected.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm(const std::string& text);
Dataset load_libsvm_file(const std::string& path);

// Canonical form: `+1`/`-1` labels, entries in index order, values in
// shortest round-trip decimal. parse(write(d)) == d for any valid d.
std::string write_libsvm(const Dataset& data);
void save_libsvm_file(const Dataset& data, const std::string& path);

// Shortest decimal that round-trips the exact double (via std::to_chars).
std::string format_double(double value);

}  // namespace rsgd

#include "robustsgd/libsvm_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rsgd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

int parse_label(std::string_view tok, size_t line) {
  if (tok == "+1" || tok == "1") return 1;
  if (tok == "-1") return -1;
  throw ParseError(line, "label must be +1, 1 or -1, got '" + std::string(tok) + "'");
}

double parse_value(std::string_view tok, size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, "bad feature value '" + std::string(tok) + "'");
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  Dataset data;
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto tokens = split_ws(line);
    Instance inst;
    inst.label = parse_label(tokens[0], line_no);

    int prev_idx = 0;
    for (size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const size_t colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size())
        throw ParseError(line_no, "malformed pair '" + std::string(tok) + "'");

      int idx = 0;
      const auto idx_tok = tok.substr(0, colon);
      const auto* idx_end = idx_tok.data() + idx_tok.size();
      auto [ptr, ec] = std::from_chars(idx_tok.data(), idx_end, idx);
      if (ec != std::errc() || ptr != idx_end || idx < 1)
        throw ParseError(line_no, "bad feature index '" + std::string(idx_tok) + "'");
      if (idx <= prev_idx)
        throw ParseError(line_no, "indices must be strictly increasing at '" +
                                      std::string(tok) + "'");
      prev_idx = idx;

      inst.features.entries.emplace_back(idx, parse_value(tok.substr(colon + 1), line_no));
      data.dimension = std::max(data.dimension, idx);
    }
    data.instances.push_back(std::move(inst));
  }
  return data;
}

Dataset parse_libsvm(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in);
}

Dataset load_libsvm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  Dataset data = parse_libsvm(in);
  data.meta.source = path;
  return data;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string write_libsvm(const Dataset& data) {
  std::string out;
  for (const auto& inst : data.instances) {
    out += inst.label > 0 ? "+1" : "-1";
    for (const auto& [idx, val] : inst.features.entries) {
      out += ' ';
      out += std::to_string(idx);
      out += ':';
      out += format_double(val);
    }
    out += '\n';
  }
  return out;
}

void save_libsvm_file(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << write_libsvm(data);
}

}  // namespace rsgd

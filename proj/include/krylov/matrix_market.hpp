#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "krylov/csr.hpp"

namespace krylov {

// Parse failure with the 1-based line number where it was detected.
class MatrixMarketError : public std::runtime_error {
 public:
  MatrixMarketError(std::size_t line, const std::string& what)
      : std::runtime_error("matrix market: line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

inline bool parse_real(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + tok.size() && tok.size() > 0 && std::isfinite(out);
}

inline bool parse_index(const std::string& tok, std::size_t& out) {
  if (tok.empty() || tok[0] == '-') return false;
  const char* begin = tok.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin + tok.size()) return false;
  out = static_cast<std::size_t>(v);
  return true;
}

}  // namespace detail

// Reads a coordinate-format real matrix. "symmetric" banners expand the
// stored triangle to both triangles (diagonal stored once); duplicate
// entries are summed. 1-based indices in the file, 0-based in the result.
inline CsrMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw MatrixMarketError(1, "empty input, missing banner");
  ++line_no;
  auto banner = detail::split_ws(line);
  if (banner.size() < 4 || detail::lower(banner[0]) != "%%matrixmarket")
    throw MatrixMarketError(line_no, "malformed banner, expected '%%MatrixMarket ...'");
  const std::string object = detail::lower(banner[1]);
  const std::string format = detail::lower(banner[2]);
  const std::string field = detail::lower(banner[3]);
  const std::string symmetry = banner.size() >= 5 ? detail::lower(banner[4]) : "general";
  if (object != "matrix")
    throw MatrixMarketError(line_no, "unsupported object '" + object + "'");
  if (format == "array")
    throw MatrixMarketError(line_no, "unsupported format 'array' (dense); only 'coordinate'");
  if (format != "coordinate")
    throw MatrixMarketError(line_no, "unsupported format '" + format + "'");
  if (field != "real")
    throw MatrixMarketError(line_no, "non-real field '" + field + "'; only 'real' is supported");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw MatrixMarketError(line_no, "unsupported symmetry '" + symmetry + "'");

  // Size line, after comments.
  std::size_t n_rows = 0, n_cols = 0, n_entries = 0;
  for (;;) {
    if (!std::getline(in, line)) throw MatrixMarketError(line_no + 1, "missing size line");
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 3 || !detail::parse_index(toks[0], n_rows) ||
        !detail::parse_index(toks[1], n_cols) || !detail::parse_index(toks[2], n_entries))
      throw MatrixMarketError(line_no, "malformed size line, expected 'rows cols nnz'");
    break;
  }

  std::vector<Triplet> entries;
  entries.reserve(symmetric ? 2 * n_entries : n_entries);
  std::size_t seen = 0;
  while (seen < n_entries) {
    if (!std::getline(in, line))
      throw MatrixMarketError(line_no + 1, "truncated entry list: expected " +
                                               std::to_string(n_entries) + " entries, got " +
                                               std::to_string(seen));
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (toks.size() != 3 || !detail::parse_index(toks[0], i) || !detail::parse_index(toks[1], j))
      throw MatrixMarketError(line_no, "malformed entry, expected 'row col value'");
    if (!detail::parse_real(toks[2], v))
      throw MatrixMarketError(line_no, "non-real value '" + toks[2] + "'");
    if (i < 1 || i > n_rows || j < 1 || j > n_cols)
      throw MatrixMarketError(line_no, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") out of range for " + std::to_string(n_rows) + "x" +
                                           std::to_string(n_cols));
    entries.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) entries.push_back({j - 1, i - 1, v});
    ++seen;
  }
  return CsrMatrix::from_triplets(n_rows, n_cols, std::move(entries));
}

// Serializes as coordinate/real/general with 17 significant digits, so a
// parse -> write -> parse round trip is entrywise identical.
inline void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
  const auto& rp = a.row_ptr();
  char buf[64];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.values()[p]);
      out << (i + 1) << " " << (a.col_idx()[p] + 1) << " " << buf << "\n";
    }
  }
}

inline CsrMatrix read_matrix_market_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path.string());
  return parse_matrix_market(in);
}

// Right-hand side loader: either a Matrix Market n-by-1 coordinate file
// or plain text with one value per line.
inline DenseVector read_rhs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rhs file: " + path.string());
  std::string first;
  if (!std::getline(in, first)) throw std::runtime_error("empty rhs file: " + path.string());
  if (first.rfind("%%MatrixMarket", 0) == 0 || first.rfind("%%matrixmarket", 0) == 0) {
    in.seekg(0);
    CsrMatrix m = parse_matrix_market(in);
    if (m.cols() != 1)
      throw std::runtime_error("rhs file must be an n-by-1 matrix: " + path.string());
    DenseVector b(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p) b[i] = m.values()[p];
    return b;
  }
  in.seekg(0);
  DenseVector b;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    double v = 0.0;
    if (toks.size() != 1 || !detail::parse_real(toks[0], v))
      throw std::runtime_error("rhs file " + path.string() + ": line " + std::to_string(line_no) +
                               ": expected one real value per line");
    b.push_back(v);
  }
  if (b.empty()) throw std::runtime_error("rhs file has no values: " + path.string());
  return b;
}

}  // namespace krylov

#pragma once

// Tabulated structures. File format:
//
//   mhm-table v1 <n>
//   n*n whitespace-separated nonnegative reals
//
// entry (i, j) is the distance between angles 2 pi i / n and 2 pi j / n.
// Between grid points the conformal factor d / chord is interpolated
// bilinearly over (start angle, ccw offset), so a chordal table reproduces
// the canonical structure exactly. Symmetry is restored by averaging.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhm/structure.hpp"

namespace mhm {

inline constexpr std::size_t kMinTableSize = 64;
inline constexpr double kTableSymmetryTol = 1e-9;

class TableStructure {
 public:
  /// `d` is row-major n x n.
  TableStructure(std::size_t n, const std::vector<double>& d) : n_(n), factor_(n * n) {
    const double h = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 1; k < n; ++k) {
        const std::size_t j = (i + k) % n;
        factor_[i * n + k] = d[i * n + j] / (2.0 * std::sin(0.5 * h * static_cast<double>(k)));
      }
      factor_[i * n] = 0.5 * (factor_[i * n + 1] + factor_[i * n + n - 1]);
    }
  }

  std::size_t size() const { return n_; }

  double distance(CirclePoint x, CirclePoint y) const {
    if (x == y) return 0.0;
    return 0.5 * (directed(x, y) + directed(y, x));
  }

 private:
  double directed(CirclePoint x, CirclePoint y) const {
    const double h = kTwoPi / static_cast<double>(n_);
    const double s = x.theta() / h;
    const double off = ccw_offset(x, y);
    const double t = off / h;
    const auto i0 = static_cast<std::size_t>(std::floor(s)) % n_;
    const auto k0 = static_cast<std::size_t>(std::floor(t)) % n_;
    const double fs = s - std::floor(s), ft = t - std::floor(t);
    const std::size_t i1 = (i0 + 1) % n_, k1 = (k0 + 1) % n_;
    const double r = (1 - fs) * ((1 - ft) * at(i0, k0) + ft * at(i0, k1)) + fs * ((1 - ft) * at(i1, k0) + ft * at(i1, k1));
    return r * 2.0 * std::sin(0.5 * off);
  }

  double at(std::size_t i, std::size_t k) const { return factor_[i * n_ + k]; }

  std::size_t n_;
  std::vector<double> factor_;
};

/// Parses a table; errors name the line and the entry offset.
inline TableStructure parse_table(std::istream& in, const std::string& source = "<table>") {
  const auto fail = [&](std::size_t line, const std::string& what) {
    throw Error(Errc::format, source + ":" + std::to_string(line) + ": " + what);
  };
  std::string header;
  if (!std::getline(in, header)) fail(1, "missing header");
  std::istringstream hs(header);
  std::string magic, version;
  long long n = 0;
  if (!(hs >> magic >> version >> n) || magic != "mhm-table" || version != "v1") {
    fail(1, "expected header 'mhm-table v1 <n>'");
  }
  std::string rest;
  if (hs >> rest) fail(1, "trailing text after header");
  if (n < static_cast<long long>(kMinTableSize)) {
    fail(1, "grid resolution " + std::to_string(n) + " is below " + std::to_string(kMinTableSize));
  }
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> d;
  d.reserve(size * size);
  std::string text;
  std::size_t line_no = 1;
  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream ls(text);
    std::string tok;
    while (ls >> tok) {
      const std::size_t offset = d.size();
      if (offset >= size * size) fail(line_no, "more than n*n entries");
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail(line_no, "entry " + std::to_string(offset) + " is not a number: '" + tok + "'");
      }
      const std::size_t i = offset / size, j = offset % size;
      if (!std::isfinite(value) || value < 0.0) {
        fail(line_no, "entry " + std::to_string(offset) + " (" + std::to_string(i) + "," + std::to_string(j) +
                          ") must be a finite nonnegative real");
      }
      if (i == j && value != 0.0) fail(line_no, "diagonal entry " + std::to_string(offset) + " is nonzero");
      if (i != j && value == 0.0) fail(line_no, "off-diagonal entry " + std::to_string(offset) + " is zero");
      if (j < i) {
        const double mirror = d[j * size + i];
        if (std::abs(value - mirror) > kTableSymmetryTol * std::max(value, mirror)) {
          fail(line_no, "entry " + std::to_string(offset) + " (" + std::to_string(i) + "," + std::to_string(j) +
                            ") breaks symmetry");
        }
      }
      d.push_back(value);
    }
  }
  if (d.size() != size * size) {
    fail(line_no, "expected " + std::to_string(size * size) + " entries, found " + std::to_string(d.size()));
  }
  return TableStructure(size, d);
}

inline MoebiusStructure load_table_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::structure_load, "cannot open table file '" + path + "'");
  struct Shared {
    std::shared_ptr<const TableStructure> table;
    double distance(CirclePoint x, CirclePoint y) const { return table->distance(x, y); }
  };
  return MoebiusStructure(Shared{std::make_shared<TableStructure>(parse_table(in, path))}, "table:" + path);
}

/// Writes the chordal table of resolution n (the canonical structure sampled on the grid).
inline void write_chordal_table(std::ostream& out, std::size_t n) {
  out << "mhm-table v1 " << n << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double off = kTwoPi * static_cast<double>((j + n - i) % n) / static_cast<double>(n);
      out << (j ? " " : "") << (i == j ? 0.0 : 2.0 * std::sin(0.5 * off));
    }
    out << "\n";
  }
}

}  // namespace mhm

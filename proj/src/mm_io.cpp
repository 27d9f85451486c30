// SPDX-License-Identifier: Apache-2.0
#include "tilemul/mm_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "tilemul/errors.hpp"

namespace tilemul {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

enum class Field { Real, Integer, Pattern };

struct Banner {
  Field field = Field::Real;
  bool symmetric = false;
};

Banner parse_banner(const std::string& line) {
  std::istringstream ss(line);
  std::string tag, object, format, field, symmetry;
  ss >> tag >> object >> format >> field >> symmetry;
  if (ss.fail() || tag != "%%MatrixMarket") {
    throw ParseError("malformed Matrix Market banner: \"" + line + "\"");
  }
  if (to_lower(object) != "matrix") {
    throw ParseError("unexpected Matrix Market object \"" + object + "\"");
  }
  if (to_lower(format) != "coordinate") {
    throw UnsupportedError("only coordinate format is supported, got \"" +
                           format + "\"");
  }
  Banner banner;
  const std::string f = to_lower(field);
  if (f == "real") {
    banner.field = Field::Real;
  } else if (f == "integer") {
    banner.field = Field::Integer;
  } else if (f == "pattern") {
    banner.field = Field::Pattern;
  } else if (f == "complex") {
    throw UnsupportedError("complex matrices are not supported");
  } else {
    throw ParseError("unknown Matrix Market field \"" + field + "\"");
  }
  const std::string s = to_lower(symmetry);
  if (s == "general") {
    banner.symmetric = false;
  } else if (s == "symmetric") {
    banner.symmetric = true;
  } else if (s == "skew-symmetric" || s == "hermitian") {
    throw UnsupportedError("symmetry \"" + symmetry + "\" is not supported");
  } else {
    throw ParseError("unknown Matrix Market symmetry \"" + symmetry + "\"");
  }
  return banner;
}

// Next non-comment, non-blank line; false on EOF.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

ElementCoo read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const Banner banner = parse_banner(line);

  if (!next_content_line(in, line)) {
    throw ParseError("missing Matrix Market size line");
  }
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    long long r = -1, c = -1, n = -1;
    ss >> r >> c >> n;
    std::string rest;
    if (ss.fail() || (ss >> rest, !rest.empty()) || r < 0 || c < 0 || n < 0) {
      throw ParseError("malformed size line: \"" + line + "\"");
    }
    rows = static_cast<std::uint64_t>(r);
    cols = static_cast<std::uint64_t>(c);
    nnz = static_cast<std::uint64_t>(n);
  }
  if (banner.symmetric && rows != cols) {
    throw ParseError("symmetric matrix must be square");
  }

  ElementCoo out;
  out.rows = rows;
  out.cols = cols;
  out.entries.reserve(banner.symmetric ? 2 * nnz : nnz);

  for (std::uint64_t i = 0; i < nnz; ++i) {
    long long r = 0, c = 0;
    double v = 1.0;
    in >> r >> c;
    if (banner.field != Field::Pattern) in >> v;
    if (in.fail()) {
      throw ParseError("malformed entry " + std::to_string(i + 1) + " of " +
                       std::to_string(nnz));
    }
    if (r < 1 || c < 1 || static_cast<std::uint64_t>(r) > rows ||
        static_cast<std::uint64_t>(c) > cols) {
      throw ParseError("entry " + std::to_string(i + 1) + " index (" +
                       std::to_string(r) + ", " + std::to_string(c) +
                       ") out of range");
    }
    const std::uint64_t row = static_cast<std::uint64_t>(r) - 1;
    const std::uint64_t col = static_cast<std::uint64_t>(c) - 1;
    out.entries.push_back({row, col, v});
    if (banner.symmetric && row != col) out.entries.push_back({col, row, v});
  }
  normalize_coo(out);
  return out;
}

ElementCoo read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix_market(in);
}

}  // namespace tilemul

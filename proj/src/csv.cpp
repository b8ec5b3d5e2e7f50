#include "vcs/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vcs {

namespace {

bool parse_double(std::string_view tok, double& out) {
  // Trim spaces; from_chars needs a tight token.
  size_t a = tok.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return false;
  size_t b = tok.find_last_not_of(" \t\r");
  tok = tok.substr(a, b - a + 1);
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto toks = split_commas(line);
    std::vector<double> row(toks.size());
    bool ok = true;
    size_t bad_col = 0;
    for (size_t c = 0; c < toks.size(); ++c) {
      if (!parse_double(toks[c], row[c])) {
        ok = false;
        bad_col = c;
        break;
      }
    }
    if (!ok) {
      if (!header_checked && rows.empty()) {
        header_checked = true;  // single header line allowed
        continue;
      }
      throw std::invalid_argument("non-numeric cell at line " + std::to_string(lineno) +
                                  ", column " + std::to_string(bad_col + 1));
    }
    header_checked = true;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("ragged row at line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty CSV");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_csv_matrix(f);
}

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  write_csv_matrix(f, m);
}

}  // namespace vcs

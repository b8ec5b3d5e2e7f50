#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace vcs {

// Headerless or single-header numeric CSV, comma-separated, '.' decimal.
// A first line containing any non-numeric token is treated as a header and
// skipped. Errors carry 1-based line/column positions.
Eigen::MatrixXd read_csv_matrix(std::istream& in);
Eigen::MatrixXd read_csv_matrix(const std::string& path);

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace vcs

#include "quantseg/csv.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace quantseg {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& cell, const std::string& name, long line_no) {
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
  double v = 0.0;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw CsvError(name + ":" + std::to_string(line_no) +
                   ": cannot parse numeric cell '" + cell + "'");
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line))
    throw CsvError(name + ": empty input, expected header y,x1,...,xp");
  auto header = split_line(line);
  if (header.empty() || header[0] != "y")
    throw CsvError(name + ":1: header must start with 'y'");
  const long p = static_cast<long>(header.size()) - 1;
  if (p < 1) throw CsvError(name + ":1: need at least one covariate column");
  for (long j = 1; j <= p; ++j)
    if (header[j] != "x" + std::to_string(j))
      throw CsvError(name + ":1: column " + std::to_string(j + 1) +
                     " must be named x" + std::to_string(j));

  std::vector<double> ys;
  std::vector<double> xs;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (static_cast<long>(cells.size()) != p + 1)
      throw CsvError(name + ":" + std::to_string(line_no) + ": expected " +
                     std::to_string(p + 1) + " cells, got " +
                     std::to_string(cells.size()));
    ys.push_back(parse_cell(cells[0], name, line_no));
    for (long j = 1; j <= p; ++j)
      xs.push_back(parse_cell(cells[j], name, line_no));
  }
  const long n = static_cast<long>(ys.size());
  if (n < 1) throw CsvError(name + ": no observations");
  VectorXd y = Eigen::Map<VectorXd>(ys.data(), n);
  MatrixXd x(n, p);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < p; ++j) x(i, j) = xs[i * p + j];
  return Dataset(std::move(y), std::move(x));
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open dataset file: " + path);
  return read_dataset_csv(in, path);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  std::ostringstream os;
  os.precision(17);
  os << "y";
  for (Eigen::Index j = 1; j <= data.p(); ++j) os << ",x" << j;
  os << "\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    os << data.y[i];
    for (Eigen::Index j = 0; j < data.p(); ++j) os << "," << data.x(i, j);
    os << "\n";
  }
  out << os.str();
}

void write_dataset_csv_file(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot open file for writing: " + path);
  write_dataset_csv(out, data);
  if (!out.good()) throw CsvError("write failed: " + path);
}

}  // namespace quantseg

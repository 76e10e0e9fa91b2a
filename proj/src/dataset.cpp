#include "akqr/dataset.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace akqr {

Vector DataSet::effective_weights() const {
  if (weights) return *weights;
  return Vector::Constant(size(), 1.0 / static_cast<double>(size()));
}

double DataSet::response_bound() const { return responses.size() ? responses.cwiseAbs().maxCoeff() : 0.0; }

void DataSet::validate() const {
  if (size() < 1) throw InputError("data set is empty");
  if (responses.size() != size()) throw InputError("response count differs from input count");
  if (!inputs.allFinite() || !responses.allFinite()) throw InputError("data set has non-finite entries");
  if (weights) {
    if (weights->size() != size()) throw InputError("weight count differs from input count");
    if (!weights->allFinite() || (weights->array() < 0).any()) throw InputError("weights must be nonnegative");
    if (std::abs(weights->sum() - 1.0) > 1e-12) throw InputError("weights must sum to 1");
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("csv line " + std::to_string(line) + ": cannot parse \"" + s + "\"");
  }
}

}  // namespace

DataSet read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("csv: missing header");
  const auto header = split(line);
  int d = 0;
  while (d < static_cast<int>(header.size()) && header[d] == "x" + std::to_string(d + 1)) ++d;
  if (d == 0) throw InputError("csv: header must start with x1");
  const auto rest = header.size() - static_cast<std::size_t>(d);
  const bool weighted = rest == 2 && header[d + 1] == "w";
  if (header[d] != "y" || !(rest == 1 || weighted))
    throw InputError("csv: header must be x1,...,xd,y[,w]");

  std::vector<double> xs, ys, ws;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw InputError("csv line " + std::to_string(lineno) + ": wrong column count");
    for (int c = 0; c < d; ++c) xs.push_back(parse_double(cells[c], lineno));
    ys.push_back(parse_double(cells[d], lineno));
    if (weighted) ws.push_back(parse_double(cells[d + 1], lineno));
  }
  const auto n = static_cast<Eigen::Index>(ys.size());
  DataSet data;
  data.inputs = Eigen::Map<const PointMatrix>(xs.data(), n, d);
  data.responses = Eigen::Map<const Vector>(ys.data(), n);
  if (weighted) {
    Vector w = Eigen::Map<const Vector>(ws.data(), n);
    if ((w.array() < 0).any() || !(w.sum() > 0)) throw InputError("csv: weights must be nonnegative with positive sum");
    data.weights = w / w.sum();
  }
  data.validate();
  return data;
}

DataSet read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const DataSet& data) {
  for (Eigen::Index c = 0; c < data.dim(); ++c) out << 'x' << c + 1 << ',';
  out << 'y' << (data.weights ? ",w" : "") << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < data.dim(); ++c) out << data.inputs(i, c) << ',';
    out << data.responses(i);
    if (data.weights) out << ',' << (*data.weights)(i);
    out << '\n';
  }
}

}  // namespace akqr

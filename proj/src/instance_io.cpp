#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rtbbo/error.hpp"
#include "rtbbo/ising.hpp"

namespace rtbbo {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

IsingModel read_instance(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no)) {
    throw_invalid("instance: missing spin count");
  }
  long long n_raw = 0;
  {
    std::istringstream head(line);
    if (!(head >> n_raw) || n_raw <= 0) {
      throw_invalid("instance line " + std::to_string(line_no) +
                    ": expected positive spin count");
    }
  }
  const auto n = static_cast<Eigen::Index>(n_raw);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);

  while (next_content_line(in, line, line_no)) {
    std::istringstream fields(line);
    std::vector<double> tokens;
    double value = 0.0;
    while (fields >> value) tokens.push_back(value);
    if (!fields.eof()) {
      throw_invalid("instance line " + std::to_string(line_no) +
                    ": non-numeric token");
    }
    auto index = [&](double raw) {
      if (raw < 0 || raw >= static_cast<double>(n) || raw != std::floor(raw)) {
        throw_invalid("instance line " + std::to_string(line_no) +
                      ": spin index out of range");
      }
      return static_cast<Eigen::Index>(raw);
    };
    if (tokens.size() == 3) {
      const auto i = index(tokens[0]);
      const auto j = index(tokens[1]);
      if (i == j) {
        throw_invalid("instance line " + std::to_string(line_no) +
                      ": self-coupling is not allowed");
      }
      J(i, j) += tokens[2];
      J(j, i) += tokens[2];
    } else if (tokens.size() == 2) {
      h[index(tokens[0])] += tokens[1];
    } else {
      throw_invalid("instance line " + std::to_string(line_no) +
                    ": expected 'i j J_ij' or 'i h_i'");
    }
  }
  return IsingModel(std::move(J), std::move(h));
}

IsingModel load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open instance file: " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const IsingModel& model) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const auto old_precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << n << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = model.couplings()(i, j);
      if (v != 0.0) out << i << ' ' << j << ' ' << v << '\n';
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (model.fields()[i] != 0.0) out << i << ' ' << model.fields()[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace rtbbo

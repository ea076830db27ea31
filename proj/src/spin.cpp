#include "rtbbo/spin.hpp"

#include "rtbbo/error.hpp"

namespace rtbbo {

namespace {

void check_spin(int v) {
  if (v != 1 && v != -1) {
    throw_invalid("spin value must be -1 or +1, got " + std::to_string(v));
  }
}

}  // namespace

SpinVector::SpinVector(std::size_t n, std::int8_t fill) : values_(n, fill) {
  check_spin(fill);
}

SpinVector::SpinVector(std::vector<std::int8_t> values)
    : values_(std::move(values)) {
  for (auto v : values_) check_spin(v);
}

SpinVector::SpinVector(std::initializer_list<int> values) {
  values_.reserve(values.size());
  for (int v : values) {
    check_spin(v);
    values_.push_back(static_cast<std::int8_t>(v));
  }
}

SpinVector SpinVector::from_signs(const Eigen::Ref<const Eigen::VectorXd>& x) {
  SpinVector s(static_cast<std::size_t>(x.size()), 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s.values_[static_cast<std::size_t>(i)] = x[i] < 0.0 ? -1 : 1;
  }
  return s;
}

SpinVector SpinVector::from_bits(std::uint64_t bits, std::size_t n) {
  SpinVector s(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if ((bits >> i) & 1U) s.values_[i] = 1;
  }
  return s;
}

void SpinVector::set(std::size_t i, int value) {
  check_spin(value);
  values_.at(i) = static_cast<std::int8_t>(value);
}

Eigen::VectorXd SpinVector::as_real() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = values_[i];
  }
  return x;
}

std::string SpinVector::to_string() const {
  std::string out(values_.size(), '-');
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > 0) out[i] = '+';
  }
  return out;
}

}  // namespace rtbbo

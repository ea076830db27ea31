#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "rtbbo/spin.hpp"

namespace rtbbo {

// Energy function over N spins:
//
//   H(s) = -1/2 sum_ij J_ij s_i s_j + sum_i h_i s_i + offset
//
// Couplings are stored symmetric with a zero diagonal; the constructor
// symmetrizes whatever it is given.
class IsingModel {
 public:
  IsingModel() = default;
  explicit IsingModel(std::size_t n_spins);
  IsingModel(Eigen::MatrixXd couplings, Eigen::VectorXd fields,
             double offset = 0.0);

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(fields_.size());
  }
  const Eigen::MatrixXd& couplings() const noexcept { return couplings_; }
  const Eigen::VectorXd& fields() const noexcept { return fields_; }
  double offset() const noexcept { return offset_; }

  void add_offset(double delta) { offset_ += delta; }

  IsingModel& operator+=(const IsingModel& other);
  IsingModel& operator*=(double scale);
  friend IsingModel operator+(IsingModel a, const IsingModel& b) {
    return a += b;
  }
  friend IsingModel operator*(double scale, IsingModel m) { return m *= scale; }

 private:
  Eigen::MatrixXd couplings_;
  Eigen::VectorXd fields_;
  double offset_ = 0.0;
};

double energy(const IsingModel& model, const SpinVector& s);
// Same as above for a +-1 valued real vector; no validation of entries.
double energy(const IsingModel& model,
              const Eigen::Ref<const Eigen::VectorXd>& s);

struct GroundState {
  SpinVector spins;
  double energy = 0.0;
};

inline constexpr std::size_t kBruteForceMaxSpins = 24;

// Exhaustive minimization. Ties go to the lowest binary index, where spin i
// maps to bit i and -1 maps to 0.
GroundState brute_force_min(const IsingModel& model);

// Ballistic simulated bifurcation. Unset c0/eta are derived from the model
// scale (see sb_default_c0).
struct SBConfig {
  int steps = 1000;
  double a0 = 1.0;
  std::optional<double> c0;
  double c0_gain = 1.0;  // numerator of the derived c0
  std::optional<double> eta;
  // true: fields couple to an extra free spin and the result is flipped so
  // that spin reads +1. false: fields enter as a constant force eta * h.
  bool field_spin = true;
  double dt = 0.5;
  std::uint64_t seed = 0;
  int restarts = 1;  // best-of by energy
};

void validate(const SBConfig& cfg);

// gain / (sigma * sqrt(N)), with sigma the RMS off-diagonal coupling of the
// model augmented by one ancilla spin carrying the fields. Falls back to 1
// for an all-zero model.
double sb_default_c0(const IsingModel& model, double gain = 0.5);

SpinVector sb_solve(const IsingModel& model, const SBConfig& cfg);

// Text instance format:
//   first non-comment line: N
//   "i j J_ij"  coupling between spins i and j (0-based, i != j)
//   "i h_i"     field on spin i
// Lines starting with '#' are ignored. Repeated entries accumulate.
IsingModel read_instance(std::istream& in);
IsingModel load_instance(const std::string& path);
void write_instance(std::ostream& out, const IsingModel& model);

}  // namespace rtbbo

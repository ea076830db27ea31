#include <cmath>
#include <limits>
#include <string>

#include "rtbbo/error.hpp"
#include "rtbbo/ising.hpp"
#include "rtbbo/random.hpp"

namespace rtbbo {

void validate(const SBConfig& cfg) {
  if (cfg.steps < 1) throw_invalid("SB steps must be >= 1");
  if (!(cfg.dt > 0.0)) throw_invalid("SB dt must be > 0");
  if (!(cfg.a0 > 0.0)) throw_invalid("SB a0 must be > 0");
  if (!(cfg.c0_gain > 0.0) || !std::isfinite(cfg.c0_gain)) throw_invalid("SB c0_gain must be > 0");
  if (cfg.restarts < 1) throw_invalid("SB restarts must be >= 1");
  if (cfg.c0 && !std::isfinite(*cfg.c0)) throw_invalid("SB c0 must be finite");
  if (cfg.eta && !std::isfinite(*cfg.eta)) throw_invalid("SB eta must be finite");
}

double sb_default_c0(const IsingModel& model, double gain) {
  const auto n = static_cast<double>(model.size());
  if (n == 0) return 1.0;
  // Fields act as couplings to an extra spin fixed at -1, so the augmented
  // matrix has N+1 rows and 2*|h|^2 extra off-diagonal mass.
  const double sum_sq = model.couplings().squaredNorm() +
                        2.0 * model.fields().squaredNorm();
  const double pairs = (n + 1.0) * n;
  const double sigma = std::sqrt(sum_sq / pairs);
  if (!(sigma > 0.0)) return 1.0;
  return gain / (sigma * std::sqrt(n));
}

namespace {

SpinVector solve_once(const IsingModel& model, const SBConfig& cfg, double c0,
                      double eta, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(model.size());
  Rng rng(seed);
  std::uniform_real_distribution<double> init(-0.1, 0.1);
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = init(rng);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = init(rng);

  const Eigen::MatrixXd& J = model.couplings();
  const Eigen::VectorXd field_force = -eta * model.fields();
  Eigen::VectorXd force(n);
  const double dt = cfg.dt;
  const double a0 = cfg.a0;
  for (int k = 0; k < cfg.steps; ++k) {
    const double a = static_cast<double>(k) / cfg.steps;
    force.noalias() = c0 * (J * x);
    force += field_force;
    y += (force - (a0 - a) * x) * dt;
    x += (a0 * dt) * y;
    // Inelastic walls at |x| = 1.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(x[i]) > 1.0) {
        x[i] = x[i] > 0.0 ? 1.0 : -1.0;
        y[i] = 0.0;
      }
    }
  }
  return SpinVector::from_signs(x);
}

IsingModel with_field_spin(const IsingModel& model) {
  const auto n = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
  J.topLeftCorner(n, n) = model.couplings();
  J.col(n).head(n) = -model.fields();
  J.row(n).head(n) = -model.fields().transpose();
  return IsingModel(J, Eigen::VectorXd::Zero(n + 1), model.offset());
}

}  // namespace

SpinVector sb_solve(const IsingModel& model, const SBConfig& cfg) {
  validate(cfg);
  const double c0 = cfg.c0.value_or(sb_default_c0(model, cfg.c0_gain));
  const double eta = cfg.eta.value_or(c0);
  if (cfg.field_spin && model.size() > 0 && !model.fields().isZero(0.0)) {
    SBConfig inner = cfg;
    inner.field_spin = false;
    inner.c0 = c0;
    const SpinVector ext = sb_solve(with_field_spin(model), inner);
    const auto n = model.size();
    SpinVector s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, ext[i] * ext[n]);
    return s;
  }
  if (cfg.restarts == 1) return solve_once(model, cfg, c0, eta, cfg.seed);

  SpinVector best;
  double best_energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed =
        r == 0 ? cfg.seed : derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    auto s = solve_once(model, cfg, c0, eta, seed);
    const double e = energy(model, s);
    if (e < best_energy) {
      best_energy = e;
      best = std::move(s);
    }
  }
  return best;
}

}  // namespace rtbbo

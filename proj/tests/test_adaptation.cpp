#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "rtbbo/adaptation.hpp"
#include "rtbbo/encoding.hpp"
#include "rtbbo/error.hpp"
#include "rtbbo/fm.hpp"
#include "rtbbo/ising.hpp"
#include "test_support.hpp"

using namespace rtbbo;
using namespace rtbbo::testing;

namespace {

IncentiveState with_counter(std::int64_t count, int last, double c) {
  IncentiveState st;
  st.counters = {count};
  st.last = SpinVector{last};
  st.c_exploration = c;
  return st;
}

std::set<std::uint64_t> argmin_set(const IsingModel& m) {
  std::set<std::uint64_t> out;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = m.size();
  std::vector<double> e(std::size_t{1} << n);
  for (std::uint64_t b = 0; b < e.size(); ++b) {
    e[b] = energy(m, SpinVector::from_bits(b, n));
    best = std::min(best, e[b]);
  }
  for (std::uint64_t b = 0; b < e.size(); ++b) {
    if (e[b] <= best + 1e-9 * std::max(1.0, std::abs(best))) out.insert(b);
  }
  return out;
}

}  // namespace

TEST_CASE("incentive counters follow the repeat rule") {
  IncentiveState st(IncentiveConfig{});
  incentive_update(st, SpinVector{1});
  CHECK(st.counters[0] == 0);
  incentive_update(st, SpinVector{1});
  incentive_update(st, SpinVector{1});
  CHECK(st.counters[0] == 2);

  IncentiveState alt(IncentiveConfig{});
  for (int i = 0; i < 20; ++i) {
    incentive_update(alt, SpinVector{i % 2 ? 1 : -1, 1});
    CHECK(alt.counters[0] == 0);
  }
  CHECK(alt.counters[1] == 19);
  CHECK(alt.mean_counter() == doctest::Approx(9.5));
  CHECK_THROWS_AS(incentive_update(alt, SpinVector{1}), Error);
}

TEST_CASE("incentive terms") {
  CHECK(incentive_terms(with_counter(0, 1, 0.5))[0] == 0.0);
  CHECK(incentive_terms(with_counter(10, 1, 0.5))[0] == doctest::Approx(-50.0));
  CHECK(incentive_terms(with_counter(10, -1, 0.5))[0] == doctest::Approx(50.0));

  Rng rng(3);
  IncentiveState st;
  st.c_exploration = 0.01;
  st.last = random_spins(12, rng);
  for (int i = 0; i < 12; ++i) st.counters.push_back(i * 3);
  const Eigen::VectorXd a = incentive_terms(st);
  for (std::size_t i = 0; i < 12; ++i) st.last.flip(i);
  CHECK((incentive_terms(st) + a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("controller steps") {
  IncentiveState st(IncentiveConfig{});
  st.c_exploration = 1.0;
  st.counters = {150};
  adjust_c_exploration(st);
  CHECK(st.c_exploration == 1.0);
  st.counters = {300};
  adjust_c_exploration(st);
  CHECK(st.c_exploration == doctest::Approx(1.1));
  st.c_exploration = 1.0;
  st.counters = {10};
  adjust_c_exploration(st);
  CHECK(st.c_exploration == doctest::Approx(1.0 / 1.1));
  st.counters = {100, 200};
  st.c_exploration = 2.0;
  adjust_c_exploration(st);
  CHECK(st.c_exploration == 2.0);

  st.counters = {0};
  st.c_exploration = 1e-12;
  adjust_c_exploration(st);
  CHECK(st.c_exploration == 1e-12);
  st.counters = {1000};
  st.c_exploration = 1e12;
  adjust_c_exploration(st);
  CHECK(st.c_exploration == 1e12);

  IncentiveConfig bad;
  bad.adjust_factor = 1.0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = {};
  bad.target_lo = 300;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("zero incentive and no penalty leave the surrogate argmax") {
  Rng rng(4);
  const FMParams p = random_fm(8, 3, rng);
  const IsingModel acq = assemble_acquisition(fm_to_ising(p), Eigen::VectorXd::Zero(8));
  const GroundState g = brute_force_min(acq);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t b = 0; b < 256; ++b) best = std::max(best, fm_predict(p, SpinVector::from_bits(b, 8)));
  CHECK(fm_predict(p, g.spins) == doctest::Approx(best));
  CHECK_THROWS_AS(assemble_acquisition(fm_to_ising(p), Eigen::VectorXd::Zero(3)), Error);
  CHECK_THROWS_AS(assemble_acquisition(fm_to_ising(p), Eigen::VectorXd::Zero(8), IsingModel(4)),
                  Error);
}

TEST_CASE("assembled energy is the negated acquisition value") {
  Rng rng(12);
  const ActionSpace sp({3, 2, 3});
  for (int rep = 0; rep < 20; ++rep) {
    const FMParams p = random_fm(8, 2, rng);
    IncentiveState st;
    st.c_exploration = 0.05;
    st.last = random_spins(8, rng);
    for (int i = 0; i < 8; ++i) st.counters.push_back(rep + i);
    const Eigen::VectorXd inc = incentive_terms(st);
    const IsingModel acq = assemble_acquisition(fm_to_ising(p), inc, penalty_model(sp, 3.0));
    for (int k = 0; k < 20; ++k) {
      const SpinVector s = random_spins(8, rng);
      const double value = fm_predict(p, s) + inc.dot(s.as_real()) + direct_penalty(sp, 3.0, s);
      CHECK(energy(acq, s) == doctest::Approx(-value).epsilon(1e-9));
    }
  }
}

TEST_CASE("acquisition argmin decodes to the best valid action") {
  Rng rng(17);
  for (const auto& dims : {std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{3, 3}}) {
    const ActionSpace sp(dims);
    const auto actions = all_actions(sp);
    for (int rep = 0; rep < 20; ++rep) {
      const FMParams p = random_fm(sp.n_spins(), 2, rng);
      IncentiveState st;
      st.c_exploration = 0.01;
      st.last = encode(sp, actions[rep % actions.size()]);
      for (std::size_t i = 0; i < sp.n_spins(); ++i) st.counters.push_back((rep * 7 + i) % 11);
      const Eigen::VectorXd inc = incentive_terms(st);

      double best = -std::numeric_limits<double>::infinity();
      Action best_action;
      for (const auto& a : actions) {
        const SpinVector s = encode(sp, a);
        const double v = fm_predict(p, s) + inc.dot(s.as_real());
        if (v > best) {
          best = v;
          best_action = a;
        }
      }
      const IsingModel acq = assemble_acquisition(fm_to_ising(p), inc, penalty_model(sp, 1000.0));
      const GroundState g = brute_force_min(acq);
      CHECK(one_hot(sp, g.spins));
      CHECK(decode(sp, g.spins, actions.front()) == best_action);
    }
  }
}

TEST_CASE("argmin set is invariant to a constant offset") {
  Rng rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const FMParams p = random_fm(10, 2, rng);
    IsingModel a = assemble_acquisition(fm_to_ising(p), Eigen::VectorXd::Zero(10));
    const auto before = argmin_set(a);
    a.add_offset(123.5 * (rep - 5));
    CHECK(argmin_set(a) == before);
  }
}

TEST_CASE("valid-state argmax does not depend on the encoding coefficient") {
  Rng rng(19);
  const ActionSpace sp({3, 4});
  const auto actions = all_actions(sp);
  for (int rep = 0; rep < 10; ++rep) {
    const FMParams p = random_fm(sp.n_spins(), 3, rng);
    const IsingModel sur = fm_to_ising(p);
    auto best_valid = [&](double c) {
      const IsingModel acq = assemble_acquisition(sur, Eigen::VectorXd{}, penalty_model(sp, c));
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t i = 0; i < actions.size(); ++i) {
        const double e = energy(acq, encode(sp, actions[i]));
        if (e < best) {
          best = e;
          arg = i;
        }
      }
      return arg;
    };
    const std::size_t ref = best_valid(0.01);
    CHECK(best_valid(1.0) == ref);
    CHECK(best_valid(1e4) == ref);
  }
}

TEST_CASE("multi-reward integration") {
  Rng rng(23);
  const FMParams a = random_fm(9, 3, rng);
  const std::vector<FMParams> one{a};
  const std::vector<double> unit{1.0};
  const IsingModel single = integrate_multi(one, unit);
  const IsingModel ref = fm_to_ising(a);
  CHECK(single.couplings().isApprox(ref.couplings()));
  CHECK(single.fields() == ref.fields());
  CHECK(single.offset() == ref.offset());

  const std::vector<FMParams> twice{a, a};
  const std::vector<double> ones{1.0, 1.0};
  const IsingModel doubled = integrate_multi(twice, ones);
  for (int k = 0; k < 20; ++k) {
    const SpinVector s = random_spins(9, rng);
    CHECK(energy(doubled, s) == doctest::Approx(2.0 * energy(ref, s)));
  }

  const std::vector<FMParams> three{random_fm(9, 3, rng), random_fm(9, 3, rng), random_fm(9, 3, rng)};
  const std::vector<double> w{0.5, 1.0, 2.0};
  const IsingModel sum = integrate_multi(three, w);
  for (int k = 0; k < 100; ++k) {
    const SpinVector s = random_spins(9, rng);
    double expect = 0.0;
    for (int m = 0; m < 3; ++m) expect -= w[m] * fm_predict(three[m], s);
    CHECK(energy(sum, s) == doctest::Approx(expect).epsilon(1e-9));
  }

  const std::vector<FMParams> mixed{random_fm(9, 3, rng), random_fm(8, 3, rng)};
  CHECK_THROWS_AS(integrate_multi(mixed, ones), Error);
  CHECK_THROWS_AS(integrate_multi(three, ones), Error);
}

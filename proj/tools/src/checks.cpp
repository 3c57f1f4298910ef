#include "rwl1cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <random>
#include <sstream>
#include <utility>

#include "rwl1/bench.hpp"
#include "rwl1/binary_io.hpp"
#include "rwl1/reweight.hpp"
#include "rwl1/rng.hpp"
#include "rwl1/sensing.hpp"
#include "rwl1/signalgen.hpp"
#include "rwl1/theory.hpp"
#include "rwl1/wbpdn.hpp"

namespace rwl1::cli {

namespace {

using Outcome = std::pair<bool, std::string>;

template <typename F>
void add(std::vector<CheckResult>& out, std::string name, F&& f) {
  CheckResult r;
  r.name = std::move(name);
  try {
    auto [ok, detail] = f();
    r.pass = ok;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("threw: ") + e.what();
  }
  out.push_back(std::move(r));
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Outcome near(double got, double want, double tol) {
  return {std::abs(got - want) <= tol, "got " + num(got) + ", want " + num(want)};
}

SensingMatrix rip_fixture() {
  Matrix a(2, 3);
  const double h = 1.0 / std::sqrt(2.0);
  a << 1.0, 0.0, h, 0.0, 1.0, h;
  return SensingMatrix(a);
}

}  // namespace

std::vector<CheckResult> theory_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  add(out, "gamma(w, 1) == w for 100 random w", [&]() -> Outcome {
    Rng rng(derive_seed(seed, 11));
    for (int i = 0; i < 100; ++i) {
      const double w = rng.uniform();
      if (theory::gamma(w, 1.0) != w) return {false, "mismatch at w = " + num(w)};
    }
    return {true, "exact"};
  });
  add(out, "gamma(0.5, 0) = 0.5 + 0.5 sqrt(2)", [] {
    return near(theory::gamma(0.5, 0.0), 0.5 + 0.5 * std::sqrt(2.0), 1e-15);
  });
  add(out, "rip_bound(3, 1) = 0.5", [] { return near(theory::rip_bound(3.0, 1.0), 0.5, 1e-15); });
  add(out, "rip_condition_ok(3, 1, 0.4)", []() -> Outcome {
    return {theory::rip_condition_ok(3.0, 1.0, 0.4), "bound 0.5 vs delta 0.4"};
  });
  add(out, "eta(1, a, 3, 0, 0) = 2(1+sqrt 3)/(sqrt 3-1)", [] {
    const double s3 = std::sqrt(3.0);
    const double want = 2.0 * (1.0 + s3) / (s3 - 1.0);
    return near(theory::eta(1.0, 0.3, 3.0, 0.0, 0.0), want, 1e-12 * want);
  });
  add(out, "nsp_constant(4, 0, 0) = 1.5", []() -> Outcome {
    const double c = theory::nsp_constant(4.0, 0.0, 0.0);
    return {c == 1.5, "got " + num(c)};
  });
  add(out, "brute-force delta_2 of 2x3 fixture = 1/sqrt(2)", [] {
    return near(theory::brute_force_rip(rip_fixture(), 2).delta, 1.0 / std::sqrt(2.0), 1e-9);
  });
  add(out, "brute-force delta_2 of orthonormal columns = 0", [] {
    return near(theory::brute_force_rip(SensingMatrix(Matrix::Identity(3, 3)), 2).delta, 0.0,
                1e-12);
  });
  add(out, "decay condition on a k-sparse signal gives k - s0", [&]() -> Outcome {
    constexpr std::size_t N = 50, k = 10, s0 = 4;
    Rng rng(derive_seed(seed, 12));
    Vector x = Vector::Zero(N);
    for (auto i : rng.sample_without_replacement(N, k))
      x[static_cast<Eigen::Index>(i)] = rng.sign() * (1.0 + rng.uniform());
    const IndexSet t0 = top_support(x, k);
    const IndexSet tt = top_support(x, s0);
    const auto d1 = theory::decay_condition_max_d1(x, t0, tt, 0.5, 2.0, s0);
    if (!d1) return {false, "no d1 found"};
    return {*d1 == k - s0, "got " + std::to_string(*d1) + ", want " + std::to_string(k - s0)};
  });
  add(out, "decay condition on a geometric tail gives 1", []() -> Outcome {
    constexpr std::size_t N = 30;
    Vector x(N);
    for (std::size_t j = 0; j < N; ++j) x[static_cast<Eigen::Index>(j)] = std::ldexp(1.0, -static_cast<int>(j + 1));
    const IndexSet top5 = top_support(x, 5);
    const auto d1 = theory::decay_condition_max_d1(x, top5, top5, 1.0, 1.0, 3);
    if (!d1) return {false, "no d1 found"};
    return {*d1 == 1, "got " + std::to_string(*d1) + ", want 1"};
  });
  return out;
}

std::vector<CheckResult> prop2_checks(std::size_t trials, std::uint64_t seed) {
  std::vector<CheckResult> out;
  add(out, "accuracy(s0=10, k=20, rho=0.5) = 1", [] {
    return near(theory::prop2_accuracy(10, 20, 0.5).value, 1.0, 1e-15);
  });
  add(out, "accuracy(s0=10, k=20, rho=0.8) = 0.625", [] {
    return near(theory::prop2_accuracy(10, 20, 0.8).value, 0.625, 1e-15);
  });
  add(out, "accuracy(rho=1) = s0/k", [] {
    return near(theory::prop2_accuracy(7, 20, 1.0).value, 0.35, 1e-15);
  });
  add(out, "simulation vs formula (N=2000, k=20, s0=10, s1=15)", [&]() -> Outcome {
    const auto sim = theory::prop2_simulate(2000, 20, 10, 15, trials, derive_seed(seed, 21));
    const double formula = theory::prop2_accuracy(10, 20, sim.rho_hat).value;
    const double gap = std::abs(sim.accuracy - formula);
    return {gap <= 0.02, "simulated " + num(sim.accuracy) + ", formula " + num(formula) +
                             " at rho " + num(sim.rho_hat) + ", gap " + num(gap) + " (<= 0.02)"};
  });
  add(out, "boundary rho = s0/k gives accuracy 1", [&]() -> Outcome {
    const double f = theory::prop2_accuracy(10, 20, 0.5).value;
    const auto sim = theory::prop2_simulate(2000, 20, 20, 20, std::min<std::size_t>(trials, 1000),
                                            derive_seed(seed, 22));
    const bool ok = std::abs(f - 1.0) <= 0.02 && std::abs(sim.accuracy - 1.0) <= 0.02;
    return {ok, "formula " + num(f) + ", simulated (s0 = s1 = k) " + num(sim.accuracy)};
  });
  return out;
}

std::vector<CheckResult> solver_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  add(out, "identity system returns y", [] {
    Vector y(2);
    y << 1.0, 2.0;
    const auto r = solve(SensingMatrix(Matrix::Identity(2, 2)), {y, 0.0}, WeightVector::ones(2));
    return near((r.solution - y).norm(), 0.0, 1e-9);
  });
  add(out, "A = [1 2], y = 2, unit weights -> (0, 1)", []() -> Outcome {
    Matrix a(1, 2);
    a << 1.0, 2.0;
    const auto r = solve(SensingMatrix(a), {Vector::Constant(1, 2.0), 0.0}, WeightVector::ones(2));
    const bool ok = std::abs(r.solution[0]) <= 1e-9 && std::abs(r.solution[1] - 1.0) <= 1e-9;
    return {ok, "objective " + num(r.objective)};
  });
  add(out, "A = [1 2], y = 2, weights (1, 3) -> (2, 0)", []() -> Outcome {
    Matrix a(1, 2);
    a << 1.0, 2.0;
    Vector w(2);
    w << 1.0, 3.0;
    const auto r = solve(SensingMatrix(a), {Vector::Constant(1, 2.0), 0.0}, WeightVector(w));
    const bool ok = std::abs(r.solution[0] - 2.0) <= 1e-9 && std::abs(r.solution[1]) <= 1e-9;
    return {ok, "objective " + num(r.objective)};
  });
  add(out, "noisy ball: A = I, y = (3, 4), eps = 1", [] {
    Vector y(2);
    y << 3.0, 4.0;
    const auto r = solve(SensingMatrix(Matrix::Identity(2, 2)), {y, 1.0}, WeightVector::ones(2));
    return near(r.objective, 7.0 - std::sqrt(2.0), 1e-6);
  });
  add(out, "1-sparse recovery, n=20, N=100, 20 seeds", [&]() -> Outcome {
    int hits = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto A = gen_gaussian(20, 100, derive_seed(seed, 31, t));
      SignalSpec s;
      s.N = 100;
      s.k = 1;
      s.seed = derive_seed(seed, 32, t);
      const Vector x = gen_sparse(s);
      const auto r = run_l1(A, measure(A, x, 0.0, 0));
      if ((r.solution - x).norm() <= 1e-4 * x.norm()) ++hits;
    }
    return {hits >= 19, std::to_string(hits) + "/20 exact"};
  });
  add(out, "SDRL1 first iterate equals plain l1", [&]() -> Outcome {
    const auto A = gen_gaussian(40, 120, derive_seed(seed, 41));
    SignalSpec s;
    s.N = 120;
    s.k = 12;
    s.seed = derive_seed(seed, 42);
    const auto m = measure(A, gen_sparse(s), 0.0, 0);
    OuterConfig cfg;
    cfg.keep_iterates = true;
    const auto l1 = run_l1(A, m, cfg);
    const auto sd = run_sdrl1(A, m, cfg);
    const double gap = (*sd.trace.front().solution - l1.solution).norm();
    return {gap <= 1e-9 * (1.0 + l1.solution.norm()), "difference " + num(gap)};
  });
  add(out, "binary matrix round trip in a temp file", []() -> Outcome {
    const auto path = std::filesystem::temp_directory_path() /
                      ("rwl1_selftest_" + std::to_string(std::random_device{}()) + ".bin");
    const Matrix m = Matrix::Random(3, 4);
    io::write_matrix(path, m);
    const Matrix back = io::read_matrix(path);
    std::filesystem::remove(path);
    return {back == m, "3x4"};
  });
  add(out, "experiment CSV identical for 1 and 3 workers", [&]() -> Outcome {
    bench::SparseGridConfig cfg;
    cfg.N = 60;
    cfg.n_fractions = {0.5};
    cfg.k_over_n = {0.2};
    cfg.trials = 4;
    cfg.master_seed = seed;
    std::ostringstream one, three;
    cfg.workers = 1;
    bench::write_csv(one, bench::run_sparse_grid(cfg));
    cfg.workers = 3;
    bench::write_csv(three, bench::run_sparse_grid(cfg));
    return {one.str() == three.str(), std::to_string(one.str().size()) + " bytes"};
  });
  return out;
}

bool print_table(std::ostream& out, const std::vector<CheckResult>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    out << (c.pass ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ')
        << c.detail << '\n';
  }
  out << (all ? "all " : "") << checks.size() << " checks, "
      << std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; })
      << " failed\n";
  return all;
}

}  // namespace rwl1::cli

// Wall-clock timings of the serial and OpenMP kernels and of the group pipeline.
// Usage: qperm_bench [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "qperm/hopf.hpp"
#include "qperm/kernels.hpp"
#include "qperm/orbitals.hpp"
#include "qperm/states.hpp"

using namespace qperm;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* what, double serial, double parallel) {
  std::printf("%-34s %12.6f %12.6f %8.2fx\n", what, serial, parallel, parallel > 0 ? serial / parallel : 0.0);
}

CMatrix random_matrix(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(nd(gen), nd(gen));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
  std::mt19937_64 gen(1);
  std::printf("threads: %d, repetitions: %d\n", kernels::thread_count(), reps);

  std::printf("\n%-34s %12s %12s %9s\n", "build (s)", "", "", "");
  auto build = [](const char* name, const MagicUnitary& u) {
    GroupPtr h;
    const double t = seconds([&] { h = std::make_shared<const HopfData>(build_hopf(u)); }, 1);
    std::printf("%-34s %12.6f   dim %zu, carrier %zu\n", name, t, h->dim, h->ambient_dim());
    return h;
  };
  const GroupPtr kp = build("Kac-Paljutkin", kac_paljutkin());
  const GroupPtr s4 = build("S4", symmetric_group(4));
  const GroupPtr ds4 = build("dual S4 in S5+",
                             dual_group(GroupTable::from_permutations(
                                 {permutation_from_one_based({2, 1, 3, 4}), permutation_from_one_based({1, 3, 4, 2})})));

  std::printf("\n%-34s %12s %12s %9s\n", "kernel (s per call)", "serial", "parallel", "speedup");
  for (std::size_t n : {64, 128}) {
    const CMatrix a = random_matrix(n, gen), b = random_matrix(n, gen);
    const std::string label = "matmul " + std::to_string(n);
    row(label.c_str(), seconds([&] { kernels::serial::matmul(a, b); }, reps),
        seconds([&] { kernels::parallel::matmul(a, b); }, reps));
  }
  for (const auto& [name, h] : {std::pair{"project S4", s4}, std::pair{"project dual S4", ds4}}) {
    const CMatrix x = random_matrix(h->ambient_dim(), gen);
    row(name, seconds([&] { kernels::serial::project(h->basis, x); }, reps),
        seconds([&] { kernels::parallel::project(h->basis, x); }, reps));
  }
  for (const auto& [name, h] : {std::pair{"convolution tensor S4", s4}, std::pair{"convolution tensor dual S4", ds4}}) {
    const auto x = haar_state(h).coords;
    row(name, seconds([&] { kernels::serial::contract_bilinear(h->comult, x, x); }, reps),
        seconds([&] { kernels::parallel::contract_bilinear(h->comult, x, x); }, reps));
  }

  std::printf("\n%-34s %12s %12s %9s\n", "orbital scan (s)", "serial", "parallel", "speedup");
  row("3-orbital norms, Kac-Paljutkin", seconds([&] { orbital_relation(*kp, 3, kOrbitalTol, Execution::Serial); }, 1),
      seconds([&] { orbital_relation(*kp, 3, kOrbitalTol, Execution::Parallel); }, 1));
  row("3-orbital norms, dual S4", seconds([&] { orbital_relation(*ds4, 3, kOrbitalTol, Execution::Serial); }, 1),
      seconds([&] { orbital_relation(*ds4, 3, kOrbitalTol, Execution::Parallel); }, 1));

  std::printf("\n%-34s %12s\n", "states (s)", "");
  std::printf("%-34s %12.6f\n", "fix spectrum, dual S4", seconds([&] { fix_spectrum(*ds4); }, 1));
  std::printf("%-34s %12.6f\n", "power 200, Haar on S4", seconds([&] { convolution_power(haar_state(s4), 200); }, 1));
  return 0;
}

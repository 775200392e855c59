// Times the pairwise winner matrix, serial against OpenMP.
#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "scottlab/efgame.hpp"
#include "scottlab/structures.hpp"

using namespace scottlab;

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EF winner matrix benchmark"};
  std::size_t members = 16, universe = 7, alpha = 3, capC = 2, capF = 4, repeats = 3;
  std::uint64_t seed = 1;
  double density = 0.3;
  app.add_option("--members", members)->capture_default_str();
  app.add_option("--universe", universe)->capture_default_str();
  app.add_option("--alpha", alpha)->capture_default_str();
  app.add_option("--cap-c", capC)->capture_default_str();
  app.add_option("--cap-f", capF)->capture_default_str();
  app.add_option("--repeats", repeats)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--density", density)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const Signature sig({{"E", 2}, {"P", 1}});
  std::vector<FiniteStructure> ms;
  for (std::size_t i = 0; i < members; ++i) ms.push_back(randomStructure(seed + i, sig, universe, density));
  const EFConfig cfg{canonical(alpha), capC, capF};
  validateConfig(cfg, universe);

  WinnerMatrix serial, parallel;
  double bestSerial = 1e300, bestParallel = 1e300;
  for (std::size_t r = 0; r < repeats; ++r) {
    bestSerial = std::min(bestSerial, seconds([&] { serial = winnerMatrixSerial(ms, cfg); }));
    bestParallel = std::min(bestParallel, seconds([&] { parallel = winnerMatrixParallel(ms, cfg); }));
  }
  if (serial != parallel) {
    std::cerr << "serial and parallel matrices differ\n";
    return 1;
  }
  std::cout << "pairs " << members * members << ", universe " << universe << ", canonical(" << alpha
            << "), caps (" << capC << "," << capF << ")\n"
            << "serial   " << bestSerial << " s\n"
            << "parallel " << bestParallel << " s\n"
            << "speedup  " << bestSerial / bestParallel << "\n";
  return 0;
}

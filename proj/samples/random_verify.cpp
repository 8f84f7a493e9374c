// Generates seeded random composable pairs and runs the full check on
// each: `sample_random_verify [count] [first-seed]`.

#include <cstdlib>
#include <iostream>

#include "gcorr/gcorr.hpp"

int main(int argc, char** argv) {
  using namespace gcorr;
  int           count = argc > 1 ? std::atoi(argv[1]) : 10;
  std::uint64_t first = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
  int           bad   = 0;
  for (int i = 0; i < count; ++i) {
    std::uint64_t seed = first + static_cast<std::uint64_t>(i);
    RandomPair    p    = random_pair(seed);
    try {
      CompositionResult R = compose(p.X, p.Y);
      GramReport        G = verify_theorem(p.X, p.Y, R);
      std::cout << "seed " << seed << ": |X| = " << p.X.num_points()
                << ", |Y| = " << p.Y.num_points() << ", |Omega| = " << R.orbits.num_orbits()
                << ", isometry " << G.isometry_basis << " / " << G.isometry_random
                << ", intertwining " << G.intertwining << (G.ok() ? "  ok" : "  FAILED") << "\n";
      bad += G.ok() ? 0 : 1;
    } catch (StageError const& e) {
      std::cout << "seed " << seed << ": stage " << e.stage() << " failed: " << e.what() << "\n";
      ++bad;
    }
  }
  return bad == 0 ? 0 : 1;
}

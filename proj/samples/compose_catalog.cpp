// Composes every catalog pair, checks the composite against the expected
// correspondence and prints the composite's weights.

#include <iostream>

#include "gcorr/gcorr.hpp"

int main() {
  using namespace gcorr;
  int failures = 0;
  for (auto const& name : catalog_names()) {
    CatalogEntry      e = catalog_entry(name);
    CompositionResult R = compose(e.X, e.Y);
    GramReport        G = verify_theorem(e.X, e.Y, R);

    std::cout << name << ": " << e.summary << "\n"
              << "  |Z| = " << R.Z.pairs.size() << ", |Omega| = " << R.orbits.num_orbits()
              << ", exact = " << (R.exact() ? "yes" : "no")
              << ", isometry deviation = " << G.isometry_basis << "\n";
    for (Index w = 0; w < R.composite.num_points(); ++w) {
      std::cout << "    mu" << R.omega.point_name(w) << " = " << R.composite.lambda.weight(w) << "\n";
    }
    if (!R.report.ok() || !G.ok()) {
      ++failures;
      std::cout << R.report.render() << G.report.render();
    }
  }
  return failures == 0 ? 0 : 1;
}

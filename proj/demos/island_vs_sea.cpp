// Unitary C_k(t) for a coherent state launched in the resonance island and one
// launched in the chaotic sea, printed side by side.
//
//   ./island_vs_sea [k] [steps]

#include <cstdio>
#include <cstdlib>

#include "qtorus/qtorus.hpp"

int main(int argc, char** argv) {
    const int k = argc > 1 ? std::atoi(argv[1]) : 8;
    const int steps = argc > 2 ? std::atoi(argv[2]) : 30;
    const auto g = qtorus::make_geometry(k);
    const qtorus::QuantumPropagator u(g, qtorus::HarperParams{});

    auto island = qtorus::coherent_state(g, 0.25, 0.25);
    auto sea = qtorus::coherent_state(g, 0.25, 0.0);
    std::printf("# k=%d  C_k(GHZ)=%.6f\n# t  island  sea\n", k, qtorus::ghz_concurrence(k));
    for (int t = 0; t <= steps; ++t) {
        std::printf("%3d  %.6f  %.6f\n", t, qtorus::pure_concurrence(island).value,
                    qtorus::pure_concurrence(sea).value);
        island = u.apply(island);
        sea = u.apply(sea);
    }
}

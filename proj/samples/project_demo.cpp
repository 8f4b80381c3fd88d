// Minimal library walkthrough: build a small instance, project it with the
// randomized and the deterministic solver, and poke at the dual.

#include <iostream>
#include <random>

#include "sepsparse/sepsparse.hpp"

int main() {
    using namespace sepsparse;

    // A signal whose two largest coefficients sit right next to each other,
    // so plain top-k would violate the separation constraint.
    std::vector<double> signal{0.1, 2.0, 1.9, 0.0, 0.7, 0.0, -1.2, 0.3};
    std::vector<WideInt> costs = quantize_signal(signal, QuantizationConfig{16});

    ProjectionInstance inst(costs, /*sparsity=*/3, /*separation=*/2);

    std::mt19937_64 rng(7);
    LasspResult randomized = lassp(inst, rng);
    auto [det_support, det_value] = recover(inst);

    std::cout << "lassp value:   " << randomized.value << " (iterations: " << randomized.iterations
              << ")\n";
    std::cout << "recover value: " << det_value << "\n";
    std::cout << "support:       ";
    for (Index i : det_support.indices) std::cout << i << ' ';
    std::cout << "\n";

    // Strong duality: the dual optimum matches the projection value.
    std::cout << "dual optimum:  " << opt_value_of_dual(inst.costs, inst.delta, inst.k).objective
              << "\n";
    return 0;
}

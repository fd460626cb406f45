#pragma once

#include <string>
#include <vector>

#include "metags/hamiltonian.hpp"

namespace metags {

// A fixed benchmark instance: a random tree (degree <= 3) or a fragment of the order-2 Vicsek tree
struct Instance {
    std::string name;
    std::string shape; // "random" or "vicsek"
    std::string model; // "heisenberg" or "tfim" (J = 0.25, h = 0.5)
    int n = 0;
    std::uint64_t seed = 0;
};

InteractionTree instance_tree(const Instance& in);
LocalHamiltonian instance_hamiltonian(const Instance& in);

// twelve gapped instances, D in {1, 2}, n from 8 to 14
std::vector<Instance> acceptance_suite();
// the n <= 10 part, for quick runs
std::vector<Instance> small_suite();

} // namespace metags

#include "metags/instances.hpp"

namespace metags {

InteractionTree instance_tree(const Instance& in) {
    if (in.shape == "random") return gen_random_tree(in.n, 3, in.seed);
    if (in.shape == "vicsek") {
        auto big = gen_vicsek(2);
        return induced_subtree(big, grow_fragment(big, 0, in.n, in.seed));
    }
    throw InvalidInput("unknown instance shape '" + in.shape + "'");
}

LocalHamiltonian instance_hamiltonian(const Instance& in) {
    auto t = instance_tree(in);
    if (in.model == "heisenberg") return heisenberg(t);
    if (in.model == "tfim") return transverse_ising(t, 0.25, 0.5);
    throw InvalidInput("unknown instance model '" + in.model + "'");
}

std::vector<Instance> acceptance_suite() {
    // Heisenberg seeds are picked so that the sublattices differ by at most one site (D <= 2);
    // the order-2 Vicsek fragments from the centre with 8 sites all have D = 3, hence n = 9 there
    std::vector<Instance> s = {
        {"", "random", "heisenberg", 8, 1},  {"", "random", "heisenberg", 11, 2}, {"", "random", "heisenberg", 14, 1},
        {"", "random", "tfim", 9, 1},        {"", "random", "tfim", 12, 2},       {"", "random", "tfim", 14, 3},
        {"", "vicsek", "heisenberg", 9, 1},  {"", "vicsek", "heisenberg", 11, 2}, {"", "vicsek", "heisenberg", 13, 3},
        {"", "vicsek", "tfim", 10, 1},       {"", "vicsek", "tfim", 12, 2},       {"", "vicsek", "tfim", 14, 3},
    };
    for (auto& i : s) i.name = i.shape + "-" + i.model + "-n" + std::to_string(i.n) + "-s" + std::to_string(i.seed);
    return s;
}

std::vector<Instance> small_suite() {
    std::vector<Instance> out;
    for (const auto& i : acceptance_suite())
        if (i.n <= 10) out.push_back(i);
    return out;
}

} // namespace metags

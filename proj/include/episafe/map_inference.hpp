#pragma once

#include "episafe/model.hpp"

namespace episafe {

enum class MapMethod { BruteForce, MinCut };

enum class MapClass { PolarizedSafe, PolarizedInfected, Mixed };

const char* to_string(MapClass c);
const char* to_string(MapMethod m);

/// Minimum-energy completion of a seeded infection pattern.
struct MapResult {
    SpinState state;    // seeds are +1
    double energy;      // equals energy(model, state)
    MapMethod method;
    bool tie_broken;    // another state attains the same optimal energy
};

/// Exhaustive minimization over all completions of the seed clamp.
///
/// Ties are resolved canonically: fewest +1 nodes, then lexicographically
/// smallest spin vector reading -1 < +1. Throws capacity_error when the
/// number of free nodes exceeds max_free (use map_mincut instead).
MapResult map_bruteforce(const IsingModel& model, const SeedSet& seeds, int max_free = 25);

/// Exact MAP via reduction to a minimum s-t cut; polynomial in the model size.
///
/// Valid because the model is attractive: rewriting the energy in
/// disagreement form gives pairwise penalties 2*J_ab for misaligned
/// neighbors and unary penalties 2*|h_a| for spins opposing their field, all
/// nonnegative, so the optimum is a minimum cut separating the +1 side from
/// the -1 side. Seeds are folded into the source. Among minimum cuts the
/// inclusion-minimal source side is returned, which matches the brute-force
/// tie-break (it is the unique optimal state with fewest +1 nodes).
MapResult map_mincut(const IsingModel& model, const SeedSet& seeds);

/// Polarized-safe when only the seeds are infected, polarized-infected when
/// every node is, mixed otherwise. A fully-seeded instance counts as
/// polarized-safe.
MapClass classify_map(const MapResult& result, const SeedSet& seeds);

}  // namespace episafe

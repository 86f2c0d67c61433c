#pragma once

#include "orbatlas/atlas.hpp"
#include "orbatlas/completion.hpp"

namespace orb {
namespace fixtures {

/// Circle model C_n: 2n points, minima b_i below a_i and a_{i+1 mod n}.
FiniteSpace circle(int n, const std::string& prefix = "");

/// The football: a sphere with Z2 isotropy at the north pole and Z3 at the
/// south pole. The base is a pole-to-pole band poset sized so that a cover
/// reduction exists; the transition chart carries a free Z2 x Z3 action.
Atlas football();

/// One chart covering the whole base with the trivial group.
Atlas one_chart();

/// Circle covered by three trivial-group arc charts.
Atlas manifold_cover();

/// Two charts with full footprint Y and free Z2 actions (the reduction must
/// fall back to the transition chart).
Atlas two_chart_full_overlap();

/// Trivially-acting Z2 gerbes over a circle: four 3/4-arcs (tetrahedral
/// nerve) and optionally a fifth chart creating 4-fold intersections.
/// charts == 2 (default) is the football-base pair distinguished by the
/// connectivity of the transition band; 4/5-chart circle covers exercise
/// the cocycle and parity machinery (their verdicts are always trivial).
Atlas gerbe(bool trivial, int charts = 2);

/// Football with an extra trivial basic chart inside the band (a proper
/// super-atlas of the football, for subatlas checks).
Atlas football_extended();

/// Product of the football with the one-chart atlas (generalized mode).
Atlas product_fixture();

/// Point-orbifold parameter sets used by the acceptance suite.
PointOrbifold point_orbifold_z2(int n_charts);          // S trivial
PointOrbifold point_orbifold_z2z2(int n_charts);        // S = Z2 diagonal
PointOrbifold point_orbifold_s3(int n_charts);          // S = Z3 in S3

/// The canonical pole-vanishing section on the football resolution, plus a
/// second admissible section with a cancelling pair of zeros.
struct FootballSections {
    std::vector<std::vector<int>> values_a, values_b; // per chart, per V-local point
    std::map<std::pair<int, int>, int> signs_a, signs_b;
};

} // namespace fixtures
} // namespace orb

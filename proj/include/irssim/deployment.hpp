#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "irssim/beamforming.hpp"

namespace irssim {

// Placement study for one surface between two terminals D apart at height H,
// and the two-user uplink where one big surface near the receiver competes
// with per-user surfaces.

// Aligned receive SNR of a single N-element surface at along-track position
// d: P b0^2 N^2 / ((d^2+H^2)((D-d)^2+H^2) noise), b0 linear.
double single_irs_snr(double power, double beta0, int n_elements, double d,
                      double span, double height, double noise);

// Aligned receive SNR through two cooperating (N/2)-element surfaces, one at
// each end: P b0^3 N^4 / (16 H^4 D^2 noise).
double double_irs_snr(double power, double beta0, int n_elements, double span,
                      double height, double noise);

// Element count above which the double-surface link wins: 4H / sqrt(b0).
double cooperation_threshold(double height, double beta0);

// Per-user-orthogonal sum rates for K users at distances user_span[k] from
// the receiver, terminal gap d:
//   shared surface:   (1/K) sum log2(1 + P b0^2 N^2     / (d^2 D_k^2 noise))
//   per-user surface: (1/K) sum log2(1 + P b0^2 (N/K)^2 / (d^2 D_k^2 noise))
// K must divide N. Their difference approaches 2 log2 K as N grows.
struct OrthogonalRates {
    double shared = 0.0;
    double dedicated = 0.0;
};
OrthogonalRates orthogonal_sum_rates(double power, double beta0,
                                     int n_elements,
                                     const std::vector<double>& user_span,
                                     double d, double noise);

enum class MacScheme { tdma, fdma, noma };
std::string scheme_name(MacScheme s);

struct RatePoint {
    double r1 = 0.0, r2 = 0.0;
};

// Boundary of a two-user rate region, sorted by increasing r1 with r2
// non-increasing.
struct RateRegion {
    std::vector<RatePoint> boundary;
};

// Region boundary for fixed per-user SNRs:
//   tdma: time share of the two single-user points;
//   fdma: r_k = a_k log2(1 + g_k/a_k) over the bandwidth split sweep
//         (noise scales with the allotted bandwidth fraction);
//   noma: superposition pentagon, both decoding orders plus the sum edge.
RateRegion mac_region(double gamma1, double gamma2, MacScheme scheme,
                      int points = 101);

// Largest r2 on/under the boundary at abscissa r1 (linear interpolation,
// -inf if r1 exceeds the region).
double region_max_r2(const RateRegion& region, double r1);
bool region_contains(const RateRegion& region, const RatePoint& p,
                     double tol = 1e-9);

struct MacGeometry {
    double beta0_db = -30.0;
    double terminal_gap = 1.0;             // surface-to-terminal distance d
    std::vector<double> user_span;         // user k to receiver distance D_k
    std::vector<double> user_angle_deg;    // bearing of each user from the receiver
};

// Deterministic per-element composite coefficients for both placements,
// plane-wave hops over a square half-wavelength grid. The shared surface
// sits by the receiver; each dedicated surface sits by its user with the
// element offsets mirrored, which makes each element's two hops under the
// dedicated placement equal (swapped) to its hops under the shared one.
struct TwinChannels {
    // shared[k][n]: composite coefficient of shared-surface element n toward
    // user k (all N elements serve every user).
    std::vector<Eigen::VectorXcd> shared;
    // dedicated[k][m]: composite coefficient of user k's own surface
    // (N/K elements); the other users' surfaces contribute nothing.
    std::vector<Eigen::VectorXcd> dedicated;
};
TwinChannels build_twin_channels(const MacGeometry& geom, int n_elements);

struct RegionPair {
    MacScheme scheme = MacScheme::tdma;
    RateRegion shared;     // one surface by the receiver
    RateRegion dedicated;  // per-user surfaces
};

// Two-user comparison of both placements under every scheme. Dedicated
// surfaces stay pointed at their own user. The shared surface re-points per
// slot under tdma; under fdma/noma one phase profile must serve both users,
// so the boundary is swept with weighted objectives maximized by
// per-element coordinate ascent from several starts (each user's aligned
// profile, split profiles, random).
std::vector<RegionPair> deployment_region_compare(const MacGeometry& geom,
                                                  int n_elements, double power,
                                                  double noise,
                                                  const AoOptions& opts,
                                                  int boundary_points = 101,
                                                  int ao_starts = 4);

// Best weighted objective max mu*r1 + (1-mu)*r2 over the scheme's region
// achievable with one shared phase profile; exposed for oracle checks.
struct WeightedPoint {
    RatePoint point;
    double objective = 0.0;
};
WeightedPoint shared_weighted_best(const std::vector<Eigen::VectorXcd>& users,
                                   double power, double noise, double mu,
                                   MacScheme scheme, const AoOptions& opts,
                                   int ao_starts);

}  // namespace irssim

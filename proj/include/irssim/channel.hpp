#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "irssim/pathloss.hpp"
#include "irssim/rng.hpp"

namespace irssim {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Carrier wavelength used for deterministic line-of-sight phases
// (2 GHz carrier); array elements sit on a half-wavelength grid.
inline constexpr double kWavelength = 0.15;

enum class LinkRole { direct, ap_irs, irs_user };
enum class FadingKind { los, rayleigh, rician };

struct FadingSpec {
    FadingKind kind = FadingKind::rayleigh;
    double rician_k = 0.0;  // linear power ratio, >= 0; ignored unless rician
    PathLossSpec path_loss;
    double distance = 1.0;
    // Steering of the deterministic component: sin of the angle seen across
    // the row/column index. Phase of entry (i,j) is
    //   2*pi*distance/lambda + pi*(i*arrive_sin + j*depart_sin),
    // i.e. a plane wave over a lambda/2 grid, which keeps the matrix rank-one.
    double arrive_sin = 0.0;
    double depart_sin = 0.0;
    // Delay-profile decay for multi-tap draws: average tap power falls by
    // this many dB per tap (0 = flat profile). Ignored by flat-fading draws.
    double tap_decay_db = 0.0;
};

struct FlatChannel {
    LinkRole role = LinkRole::direct;
    Eigen::MatrixXcd h;
};

// Per-element reflection state. Amplitudes in [0,1], phases in [0, 2*pi).
// When a discrete grid is declared, entries must sit on it:
//   phases    in {k * 2*pi/2^phase_bits}
//   amplitudes in {k / (amplitude_levels - 1)}
struct Reflection {
    Eigen::VectorXd amplitude;
    Eigen::VectorXd phase;
    std::optional<int> phase_bits;
    std::optional<int> amplitude_levels;

    Eigen::Index size() const { return amplitude.size(); }
    Eigen::VectorXcd coeffs() const;

    static Reflection unit(Eigen::Index n);  // beta = 1, theta = 0
};

// Throws std::invalid_argument when ranges or declared grids are violated.
void validate(const Reflection& refl);

// Draw one narrow-band channel matrix. LoS output is deterministic given the
// spec; rician mixes the deterministic plane wave (weight k/(k+1)) with an
// i.i.d. CN(0,1) part (weight 1/(k+1)); rayleigh is the k = 0 special case.
// Every entry has average power path_loss(spec.path_loss, spec.distance).
// Entries are drawn row-major so results are reproducible for a given seed.
FlatChannel gen_flat_channel(const FadingSpec& spec, Eigen::Index rows,
                             Eigen::Index cols, Rng& rng,
                             LinkRole role = LinkRole::direct);

// Scalar effective channel of a single-antenna link:
//   h_r^H diag(coeffs) g + conj(h_d).
cd cascade_flat(const Eigen::VectorXcd& h_r, const Eigen::VectorXcd& g,
                const Reflection& refl, cd h_d);

// Matrix effective channel H_d + H_r diag(coeffs) G, with H_r (Mr x N),
// G (N x Mt), H_d (Mr x Mt).
Eigen::MatrixXcd cascade_flat(const Eigen::MatrixXcd& H_r,
                              const Eigen::MatrixXcd& G,
                              const Reflection& refl,
                              const Eigen::MatrixXcd& H_d);

// Row vector h_r^H diag(coeffs) G + h_d^H for the multi-antenna-transmitter,
// single-antenna-receiver case.
Eigen::RowVectorXcd miso_effective(const Eigen::VectorXcd& h_r,
                                   const Eigen::MatrixXcd& G,
                                   const Reflection& refl,
                                   const Eigen::VectorXcd& h_d);

}  // namespace irssim

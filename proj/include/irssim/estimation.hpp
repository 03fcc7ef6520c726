#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "irssim/channel.hpp"

namespace irssim {

// Training works on the composite coefficients only: one direct coefficient
// plus one cascaded coefficient per (grouped) element. Nothing here sees the
// two hop channels separately.

enum class PatternKind { dft, onoff, dft_quantized, random };

struct TrainingPattern {
    PatternKind kind = PatternKind::dft;
    // T x Nbar reflection states; the direct path contributes a fixed
    // all-ones column on top of these.
    Eigen::MatrixXcd states;
    int phase_levels = 0;  // dft_quantized only
};

// T = n_bar + 1 rows.
//   dft:            rows t, columns n: exp(-j 2 pi t (n+1) / (n_bar+1));
//                   together with the direct column this is a DFT matrix,
//                   so [1 | S]^H [1 | S] = (n_bar+1) I.
//   dft_quantized:  the same with every phase snapped to phase_levels
//                   uniform steps.
//   onoff:          row 0 all elements off, row t only element t-1 on.
//   random:         i.i.d. unit-modulus phases drawn from seed.
TrainingPattern make_pattern(PatternKind kind, int n_bar, int phase_levels = 0,
                             std::uint64_t seed = 0);

// One noisy pilot observation per training row, unit pilot symbol:
//   y_t = sqrt(pilot_power) (h_d + sum_n states(t,n) c_n) + CN(0, noise).
Eigen::VectorXcd simulate_pilots(const TrainingPattern& pattern, cd h_d,
                                 const Eigen::VectorXcd& cascaded,
                                 double pilot_power, double noise_power,
                                 Rng& rng);

struct EstimationResult {
    cd direct = 0.0;
    Eigen::VectorXcd cascaded;
    double residual = 0.0;  // rms fit residual of the observations
};

// Least squares on [1 | states]; throws std::runtime_error naming the
// pattern kind when the system matrix is rank deficient.
EstimationResult ls_estimate(const TrainingPattern& pattern,
                             const Eigen::VectorXcd& observations,
                             double pilot_power);

// Per-coefficient LS error covariance diagonal, noise * ((Phi^H Phi)^-1)_ii
// / pilot_power, entry 0 = direct. The dft pattern gives
// noise / ((n_bar+1) * pilot_power) for every entry.
Eigen::VectorXd ls_error_variances(const TrainingPattern& pattern,
                                   double pilot_power, double noise_power);

// Rectangular tiling of a rows x cols element grid into equal sub-surfaces.
struct GroupingMap {
    int rows = 0, cols = 0;
    int tile_rows = 0, tile_cols = 0;
    std::vector<int> group_of;  // element (row major) -> group index
    int elements() const { return rows * cols; }
    int groups() const { return (rows / tile_rows) * (cols / tile_cols); }
    double ratio() const { return double(groups()) / elements(); }
};

// Throws unless tile_rows | rows and tile_cols | cols.
GroupingMap make_grouping(int rows, int cols, int tile_rows, int tile_cols);

// The tilings of a 12 x 12 grid used by the overhead study, keyed by group
// count in {1,2,4,6,9,12,16,24,36,48,72,144}.
GroupingMap grouping_12x12(int groups);
const std::vector<int>& grouping_12x12_counts();

// Sum the per-element cascaded coefficients inside each group.
Eigen::VectorXcd group_channels(const Eigen::VectorXcd& per_element,
                                const GroupingMap& map);

// Minimum pilot budget to acquire K user channels through an N-element
// surface with an M_B-antenna receiver: K + N + max(K-1, ceil((K-1)N/M_B)).
long min_training_multiuser(int k_users, int n_elements, int m_b);

// Largest user count servable in one shot over Q subcarriers with CIR
// length L: floor((N+1)(Q-L)/(N+L)) + 1.
int max_users_ofdm(int n_elements, int subcarriers, int cir_length);

struct GroupingStudySpec {
    int grid_rows = 12;
    int grid_cols = 12;
    double pilot_snr_db = 5.0;  // pilot power over noise, direct-path scale
    double data_snr_db = 5.0;   // data power over noise, same scale
    // 0 = independent element fading, 1 = elements identical inside a tile.
    double correlation = 0.0;
    int trials = 200;
    int phase_levels = 2;  // for the quantized pattern
};

struct GroupingRatePoint {
    double rho = 0.0;
    PatternKind kind = PatternKind::dft;
    double rate = 0.0;
};

std::string pattern_name(PatternKind kind);

// Training/beamforming trade-off: for each group count, train over
// groups+1 symbols, LS-estimate the grouped composite channel, point the
// groups at the estimates, then score the true channel with the remaining
// fraction of the coherence block:
//   rate = max(0, 1 - (groups+1)/coherence) * log2(1 + data SNR * |eff|^2).
// Every kind runs the same pipeline; channels are shared across kinds and
// group counts within a trial. Mean over spec.trials per (group count, kind).
std::vector<GroupingRatePoint> rate_vs_grouping(
    const GroupingStudySpec& spec, const std::vector<int>& group_counts,
    int coherence, const std::vector<PatternKind>& kinds, std::uint64_t seed);

}  // namespace irssim

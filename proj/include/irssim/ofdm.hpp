#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "irssim/beamforming.hpp"
#include "irssim/taps.hpp"

namespace irssim {

// Frequency-flat reflection chosen by the strongest composite tap: pick the
// delay l* maximizing |h_d[l]| + sum_n |v_n[l]| (ties to the smallest l),
// then co-phase every element's tap at l* with the direct tap there.
// element_taps holds each element's convolved two-hop CIR, unweighted by any
// reflection coefficient.
Reflection ofdm_strongest_cir(const std::vector<TapChannel>& element_taps,
                              const TapChannel& direct);

// (1/Q) sum_q log2(1 + p_q |c_q|^2 / noise) for the composite channel formed
// by refl. powers must be non-negative and within power_budget when one is
// given.
double ofdm_rate(const Reflection& refl, const Eigen::VectorXd& powers,
                 const TapChannel& direct,
                 const std::vector<TapChannel>& element_taps,
                 const OfdmSpec& spec, double noise_power,
                 double power_budget = std::numeric_limits<double>::infinity());

// Rate when the reflection may change per subcarrier: each c_q becomes
// |d_q| + sum_n |v_nq| and the powers are water-filled. Upper-bounds the
// water-filled rate of every frequency-flat reflection.
double ofdm_upper_bound(const TapChannel& direct,
                        const std::vector<TapChannel>& element_taps,
                        const OfdmSpec& spec, double tx_power,
                        double noise_power);

// Water-filled powers for a given flat reflection (helper shared by the
// harness schemes).
Eigen::VectorXd ofdm_water_fill(const Reflection& refl,
                                const TapChannel& direct,
                                const std::vector<TapChannel>& element_taps,
                                const OfdmSpec& spec, double tx_power,
                                double noise_power);

}  // namespace irssim

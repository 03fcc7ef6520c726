#pragma once

#include <Eigen/Dense>
#include <vector>

#include "irssim/channel.hpp"

namespace irssim {

// Delay-domain channel, tap 0 first.
struct TapChannel {
    Eigen::VectorXcd taps;
    Eigen::Index length() const { return taps.size(); }
};

struct OfdmSpec {
    int subcarriers = 64;
    int cp_length = 16;  // must cover the longest composite impulse response
};

// Multi-path draw whose average tap powers follow a geometric delay profile
// falling spec.tap_decay_db per tap (0 = flat, every tap equal); for rician
// the deterministic component sits on tap 0. Total average energy equals
// path_loss(spec).
TapChannel gen_tap_channel(const FadingSpec& spec, int n_taps, Rng& rng);

// coeff * (irs_user (*) ap_irs); output length L2 + L1 - 1.
TapChannel cascade_taps(const TapChannel& irs_user, const TapChannel& ap_irs,
                        cd coeff);

// h_d taps plus every element's convolved two-hop taps weighted by its
// reflection coefficient; length max(L0, L1+L2-1).
TapChannel composite_taps(const TapChannel& direct,
                          const std::vector<TapChannel>& element_taps,
                          const Reflection& refl);

// Frequency response on the subcarrier grid: c_q = sum_l taps[l] e^{-j2pi ql/Q}.
// Rows of the DFT are unit-modulus (no 1/sqrt(Q)), so
// sum_q |c_q|^2 = Q * sum_l |tap_l|^2 whenever the CIR fits in one symbol.
// Throws if the taps are longer than spec.cp_length allows.
Eigen::VectorXcd cfr_from_taps(const TapChannel& ch, const OfdmSpec& spec);

}  // namespace irssim

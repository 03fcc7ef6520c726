#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "irssim/channel.hpp"

namespace irssim {

struct AoOptions {
    int max_sweeps = 100;
    double tol = 1e-6;     // relative objective improvement per sweep, > 0
    int phase_grid = 64;   // candidate phases per element update, >= 8
    enum class Init { zero_phase, aligned, random };
    Init init = Init::aligned;
    std::uint64_t init_seed = 0;
};

struct BeamformingSolution {
    Reflection reflection;
    Eigen::VectorXcd tx_weights;     // precoder, ||w||^2 = Pt (single-stream)
    Eigen::MatrixXcd tx_covariance;  // transmit covariance (multi-stream)
    std::vector<double> objective_trace;  // initial value, then one per sweep
    bool converged = false;
    double objective = 0.0;
};

// Phase rule for a single-stream link: rotate every reflected term onto the
// phase of the direct term, theta_n = zeta - arg(h_r_n^*) - arg(g_n) with
// zeta = arg(h_d^*), zeta = 0 when h_d = 0. Amplitudes all one. After this
// the composite magnitude is sum_n |h_r_n||g_n| + |h_d|.
Reflection siso_align(const Eigen::VectorXcd& h_r, const Eigen::VectorXcd& g,
                      cd h_d);

// Pt * |h_r^H diag(c) g + conj(h_d)|^2 / noise. Accepts N = 0 (no surface).
double receive_snr(cd h_d, const Eigen::VectorXcd& h_r,
                   const Eigen::VectorXcd& g, const Reflection& refl,
                   double tx_power, double noise_power);

double rate_bps_hz(double snr);

// Large-N receive power of the aligned reflected path under i.i.d. Rayleigh
// hops with per-entry powers rho_h2, rho_g2: N^2 * Pt * pi^2 rho_h2 rho_g2/16.
double asymptotic_receive_power(int n_elements, double tx_power, double rho_h2,
                                double rho_g2);

// Elements needed to hold a target receive power at hop distance d2:
// ceil(d2^(a/2) * c1) with the caller-supplied budget constant c1.
int required_elements(double d2, double exponent, double scale_const);

// Matched single-stream precoder, w = sqrt(Pt) h / ||h||.
Eigen::VectorXcd mrt(const Eigen::VectorXcd& h, double tx_power);

// Alternating maximization of |(h_r^H diag(c) G + h_d^H) w|^2 over w and the
// phases. Each half-step is the exact conditional optimum (matched w, then
// per-element co-phasing against h_d^H w), so the trace never decreases.
// G is N x Mt, h_d length Mt.
BeamformingSolution miso_ao(const Eigen::VectorXcd& h_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::VectorXcd& h_r, double tx_power,
                            double noise_power, const AoOptions& opts);
// Same, starting from a caller-supplied reflection (opts.init ignored).
BeamformingSolution miso_ao(const Eigen::VectorXcd& h_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::VectorXcd& h_r, double tx_power,
                            double noise_power, const AoOptions& opts,
                            const Reflection& init);

// log2 det(I + H Q H^H / noise)
double mimo_rate(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q,
                 double noise_power);

// Alternating maximization of log2 det(I + (H_d + H_r diag(c) G) Q (.)^H /
// noise): per element a grid scan plus golden-section polish of the 1-D
// phase problem, then an eigenmode + water-filling update of Q. Handles
// N = 0 (plain water-filling capacity of H_d).
BeamformingSolution mimo_ao(const Eigen::MatrixXcd& H_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::MatrixXcd& H_r, double tx_power,
                            double noise_power, const AoOptions& opts);
// Same, starting from a caller-supplied reflection (opts.init ignored).
BeamformingSolution mimo_ao(const Eigen::MatrixXcd& H_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::MatrixXcd& H_r, double tx_power,
                            double noise_power, const AoOptions& opts,
                            const Reflection& init);

// p_i = max(0, mu - noise_i/gain_i) with sum p_i = total_power, mu found by
// bisection to 1e-9 * total_power within 200 iterations. Zero-gain modes get
// zero power; throws if every gain is zero or the budget is not positive.
Eigen::VectorXd water_fill(const Eigen::VectorXd& gains, double total_power,
                           const Eigen::VectorXd& noise);
Eigen::VectorXd water_fill(const Eigen::VectorXd& gains, double total_power,
                           double noise);

// Snap each phase to the nearest of 2^bits uniform levels (circular
// distance; an exact midpoint goes to the smaller index). Amplitudes pass
// through untouched.
Reflection quantize_reflection(const Reflection& refl, int phase_bits);

// Asymptotic aligned-power ratio of b-bit phases to continuous phases:
// ((2^b/pi) sin(pi/2^b))^2.
double quantization_loss(int phase_bits);

// Best 2^phase_bits-level phase pattern reachable from a continuous design
// by rounding and local search: the given phases are snapped to the grid at
// `starts` evenly spaced sub-level offsets, each candidate is improved by
// exact single-element level changes (others held fixed, transmit weights
// implicitly re-matched, so the score is ||h_r^H diag(c) G + h_d^H||^2)
// until no change helps, and the best candidate wins. Amplitudes pass
// through untouched; the result always scores at least as high as plain
// quantize_reflection of the same design.
Reflection discrete_phase_descent(const Eigen::VectorXcd& h_d,
                                  const Eigen::MatrixXcd& G,
                                  const Eigen::VectorXcd& h_r,
                                  const Reflection& continuous,
                                  int phase_bits, int starts = 8);

// On/off amplitude rule with all phases frozen at zero: element n reflects
// iff arg(h_r_n^* g_n) lies in [-pi/2, pi/2].
Reflection one_bit_amplitude(const Eigen::VectorXcd& h_r,
                             const Eigen::VectorXcd& g);

}  // namespace irssim

#include "irssim/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "irssim/beamforming.hpp"
#include "irssim/channel.hpp"
#include "irssim/deployment.hpp"
#include "irssim/estimation.hpp"
#include "irssim/ofdm.hpp"
#include "irssim/pathloss.hpp"
#include "irssim/rng.hpp"
#include "irssim/taps.hpp"

namespace irssim {

namespace {

using Cell = ExperimentResult::Cell;

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

double need_tx_power(const Scenario& s, const std::string& id) {
    require(s.transmit_power_w.has_value(), id + " needs transmit_power");
    return *s.transmit_power_w;
}

double need_noise(const Scenario& s, const std::string& id) {
    require(s.noise_power_w.has_value(), id + " needs noise_power");
    return *s.noise_power_w;
}

const LinkConfig& need_link(const Scenario& s, const std::string& id,
                            const std::string& name) {
    require(s.links.count(name) == 1, id + " needs links." + name);
    return s.links.at(name);
}

Eigen::VectorXcd draw_vec(const FadingSpec& spec, Eigen::Index n, Rng& rng,
                          LinkRole role = LinkRole::direct) {
    return gen_flat_channel(spec, n, 1, rng, role).h.col(0);
}

// The element-count sweeps reuse one hop geometry while swapping the fading
// statistics and the common path-loss exponent per listed model.
FadingSpec model_hop(const LinkConfig& link, const ModelVariant& m) {
    FadingSpec spec = link.fading();
    spec.kind = m.kind;
    spec.rician_k = m.rician_k;
    spec.path_loss.exponent = m.exponent;
    return spec;
}

ExperimentResult begin_result(const std::string& id, const Scenario& s,
                              std::uint64_t seed) {
    ExperimentResult r;
    r.experiment = id;
    r.seed = seed;
    r.config_digest = s.digest;
    return r;
}

// ---------------------------------------------------------------- fig6/fig7

void validate_siso_scaling(const std::string& id, const Scenario& s) {
    require(!s.element_grid.empty(), id + " needs element_grid");
    require(!s.channel_models.empty(), id + " needs channel_models");
    need_tx_power(s, id);
    need_link(s, id, "ap_irs");
    need_link(s, id, "irs_user");
    if (id == "fig7") need_noise(s, id);
}

// Shared sampler: reflected-path-only link, phases aligned per draw, one
// scalar statistic per trial reduced to its mean per (model, element count).
ExperimentResult run_siso_scaling(const std::string& id, const Scenario& s,
                                  std::uint64_t seed, bool as_rate) {
    validate_siso_scaling(id, s);
    const double pt = need_tx_power(s, id);
    const double noise = as_rate ? need_noise(s, id) : 0.0;
    const LinkConfig& ap_irs = need_link(s, id, "ap_irs");
    const LinkConfig& irs_user = need_link(s, id, "irs_user");
    const auto& grid = s.element_grid;
    const std::uint64_t trials = std::uint64_t(s.trials);

    ExperimentResult r = begin_result(id, s, seed);
    r.metadata.emplace_back("trials", std::to_string(s.trials));
    r.columns = as_rate
                    ? std::vector<std::string>{"model", "n", "mean_rate_bps_hz"}
                    : std::vector<std::string>{"model", "n", "mean_receive_power_w",
                                               "reference_n2_w"};

    const int n_min = *std::min_element(grid.begin(), grid.end());
    for (size_t mi = 0; mi < s.channel_models.size(); ++mi) {
        const ModelVariant& m = s.channel_models[mi];
        const FadingSpec hop_g = model_hop(ap_irs, m);
        const FadingSpec hop_h = model_hop(irs_user, m);
        std::vector<double> means(grid.size(), 0.0);
        for (size_t ni = 0; ni < grid.size(); ++ni) {
            const int n = grid[ni];
            double acc = 0.0;
            for (std::uint64_t t = 0; t < trials; ++t) {
                const std::uint64_t stream = (mi * grid.size() + ni) * trials + t;
                Rng rng(trial_seed(seed, stream));
                const Eigen::VectorXcd g = draw_vec(hop_g, n, rng, LinkRole::ap_irs);
                const Eigen::VectorXcd h = draw_vec(hop_h, n, rng, LinkRole::irs_user);
                const Reflection refl = siso_align(h, g, cd{0.0, 0.0});
                const double p = pt * std::norm(cascade_flat(h, g, refl, cd{0.0, 0.0}));
                acc += as_rate ? rate_bps_hz(p / noise) : p;
            }
            means[ni] = acc / double(trials);
        }
        double anchor = 0.0;
        for (size_t ni = 0; ni < grid.size(); ++ni)
            if (grid[ni] == n_min) anchor = means[ni];
        for (size_t ni = 0; ni < grid.size(); ++ni) {
            const int n = grid[ni];
            if (as_rate) {
                r.rows.push_back({Cell(m.label), Cell((long long)n), Cell(means[ni])});
            } else {
                const double scale = double(n) / double(n_min);
                r.rows.push_back({Cell(m.label), Cell((long long)n), Cell(means[ni]),
                                  Cell(anchor * scale * scale)});
            }
        }
    }
    return r;
}

// -------------------------------------------------------------------- fig8

void validate_fig8(const Scenario& s) {
    require(s.elements >= 1, "fig8 needs elements >= 1");
    require(!s.power_dbm_grid.empty(), "fig8 needs power_dbm_grid");
    need_noise(s, "fig8");
    need_link(s, "fig8", "ap_user");
    need_link(s, "fig8", "ap_irs");
    need_link(s, "fig8", "irs_user");
}

ExperimentResult run_fig8(const Scenario& s, std::uint64_t seed) {
    validate_fig8(s);
    const double noise = need_noise(s, "fig8");
    const int n = s.elements, mt = s.tx_antennas, mr = s.rx_antennas;
    const FadingSpec direct = s.link("ap_user").fading();
    const FadingSpec hop_g = s.link("ap_irs").fading();
    const FadingSpec hop_h = s.link("irs_user").fading();
    const auto& powers = s.power_dbm_grid;
    static const char* kMethods[] = {"ao", "random_phase", "no_irs"};

    std::vector<std::array<double, 3>> acc(powers.size(), {0.0, 0.0, 0.0});
    const Eigen::MatrixXcd g_none(0, mt);
    const Eigen::MatrixXcd h_none(mr, 0);
    for (int t = 0; t < s.trials; ++t) {
        Rng rng(trial_seed(seed, std::uint64_t(t)));
        const Eigen::MatrixXcd h_d = gen_flat_channel(direct, mr, mt, rng).h;
        const Eigen::MatrixXcd g = gen_flat_channel(hop_g, n, mt, rng, LinkRole::ap_irs).h;
        const Eigen::MatrixXcd h_r =
            gen_flat_channel(hop_h, mr, n, rng, LinkRole::irs_user).h;
        Reflection rand_refl = Reflection::unit(n);
        for (int i = 0; i < n; ++i) rand_refl.phase[i] = rng.uniform_angle();

        for (size_t pi = 0; pi < powers.size(); ++pi) {
            const double pt = dbm_to_watt(powers[pi]);
            const auto from_cfg = mimo_ao(h_d, g, h_r, pt, noise, s.options);
            const auto from_rand = mimo_ao(h_d, g, h_r, pt, noise, s.options, rand_refl);
            acc[pi][0] += std::max(from_cfg.objective, from_rand.objective);
            acc[pi][1] += from_rand.objective_trace.front();
            acc[pi][2] +=
                mimo_ao(h_d, g_none, h_none, pt, noise, s.options).objective;
        }
    }

    ExperimentResult r = begin_result("fig8", s, seed);
    r.metadata.emplace_back("trials", std::to_string(s.trials));
    r.columns = {"power_dbm", "method", "mean_rate_bps_hz"};
    for (size_t pi = 0; pi < powers.size(); ++pi)
        for (int m = 0; m < 3; ++m)
            r.rows.push_back({Cell(powers[pi]), Cell(std::string(kMethods[m])),
                              Cell(acc[pi][m] / double(s.trials))});
    return r;
}

// -------------------------------------------------------------------- fig9

void validate_fig9(const Scenario& s) {
    require(s.elements >= 1, "fig9 needs elements >= 1");
    require(!s.distance_grid.empty(), "fig9 needs distance_grid");
    need_tx_power(s, "fig9");
    need_noise(s, "fig9");
    need_link(s, "fig9", "ap_user");
    need_link(s, "fig9", "ap_irs");
    need_link(s, "fig9", "irs_user");
}

ExperimentResult run_fig9(const Scenario& s, std::uint64_t seed) {
    validate_fig9(s);
    const double pt = need_tx_power(s, "fig9");
    const double noise = need_noise(s, "fig9");
    const int n = s.elements, mt = s.tx_antennas;
    const auto& grid = s.distance_grid;
    const std::uint64_t trials = std::uint64_t(s.trials);
    static const char* kMethods[] = {"ao", "ap_user_mrt", "ap_irs_mrt", "no_irs"};

    ExperimentResult r = begin_result("fig9", s, seed);
    r.metadata.emplace_back("trials", std::to_string(s.trials));
    r.columns = {"distance_m", "method", "mean_rate_bps_hz"};

    for (size_t di = 0; di < grid.size(); ++di) {
        const double d = grid[di];
        FadingSpec direct = s.link("ap_user").fading();
        direct.distance = d;
        FadingSpec hop_g = s.link("ap_irs").fading();
        hop_g.distance = std::hypot(s.irs_along, s.irs_offset);
        FadingSpec hop_h = s.link("irs_user").fading();
        hop_h.distance = std::hypot(d - s.irs_along, s.irs_offset);

        std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
        for (std::uint64_t t = 0; t < trials; ++t) {
            Rng rng(trial_seed(seed, di * trials + t));
            const Eigen::VectorXcd h_d = draw_vec(direct, mt, rng);
            const Eigen::MatrixXcd g = gen_flat_channel(hop_g, n, mt, rng, LinkRole::ap_irs).h;
            const Eigen::VectorXcd h_r = draw_vec(hop_h, n, rng, LinkRole::irs_user);

            // precoder matched to the direct link, surface co-phased to it
            const Eigen::VectorXcd w_d = mrt(h_d, pt);
            const cd s_d = (h_d.adjoint() * w_d)(0);
            const Eigen::VectorXcd gw_d = g * w_d;
            const Reflection r_d = siso_align(h_r, gw_d, std::conj(s_d));
            acc[1] += rate_bps_hz(
                std::norm(cascade_flat(h_r, gw_d, r_d, std::conj(s_d))) / noise);

            // precoder matched to the rank-one transmitter-to-surface channel
            const Eigen::VectorXcd w_g = mrt(g.row(0).adjoint(), pt);
            const cd s_g = (h_d.adjoint() * w_g)(0);
            const Eigen::VectorXcd gw_g = g * w_g;
            const Reflection r_g = siso_align(h_r, gw_g, std::conj(s_g));
            acc[2] += rate_bps_hz(
                std::norm(cascade_flat(h_r, gw_g, r_g, std::conj(s_g))) / noise);

            acc[3] += rate_bps_hz(pt * h_d.squaredNorm() / noise);

            const auto joint = miso_ao(h_d, g, h_r, pt, noise, s.options);
            const auto alt = miso_ao(h_d, g, h_r, pt, noise, s.options, r_g);
            acc[0] += rate_bps_hz(std::max(joint.objective, alt.objective) / noise);
        }
        for (int m = 0; m < 4; ++m)
            r.rows.push_back({Cell(d), Cell(std::string(kMethods[m])),
                              Cell(acc[m] / double(trials))});
    }
    return r;
}

// ------------------------------------------------------------------- fig10

void validate_fig10(const Scenario& s) {
    require(s.elements >= 1, "fig10 needs elements >= 1");
    require(!s.power_dbm_grid.empty(), "fig10 needs power_dbm_grid");
    require(s.ofdm.has_value(), "fig10 needs the ofdm block");
    need_noise(s, "fig10");
    const LinkConfig& d = need_link(s, "fig10", "ap_user");
    const LinkConfig& g = need_link(s, "fig10", "ap_irs");
    const LinkConfig& h = need_link(s, "fig10", "irs_user");
    const int composite = std::max(d.taps, g.taps + h.taps - 1);
    require(composite <= s.ofdm->cp_length,
            "fig10: ofdm.cp_length must cover the composite impulse response");
}

ExperimentResult run_fig10(const Scenario& s, std::uint64_t seed) {
    validate_fig10(s);
    const double noise = need_noise(s, "fig10");
    const int n = s.elements;
    const OfdmSpec spec = *s.ofdm;
    const LinkConfig& direct_cfg = s.link("ap_user");
    const LinkConfig& hop_g_cfg = s.link("ap_irs");
    const LinkConfig& hop_h_cfg = s.link("irs_user");
    const auto& powers = s.power_dbm_grid;
    static const char* kMethods[] = {"upper_bound", "strongest_cir", "random_phase",
                                     "no_irs"};

    std::vector<std::array<double, 4>> acc(powers.size(), {0.0, 0.0, 0.0, 0.0});
    for (int t = 0; t < s.trials; ++t) {
        Rng rng(trial_seed(seed, std::uint64_t(t)));
        const TapChannel direct =
            gen_tap_channel(direct_cfg.fading(), direct_cfg.taps, rng);
        std::vector<TapChannel> element_taps;
        element_taps.reserve(n);
        for (int i = 0; i < n; ++i) {
            const TapChannel to_surface =
                gen_tap_channel(hop_g_cfg.fading(), hop_g_cfg.taps, rng);
            const TapChannel from_surface =
                gen_tap_channel(hop_h_cfg.fading(), hop_h_cfg.taps, rng);
            element_taps.push_back(cascade_taps(from_surface, to_surface, cd{1.0, 0.0}));
        }
        Reflection rand_refl = Reflection::unit(n);
        for (int i = 0; i < n; ++i) rand_refl.phase[i] = rng.uniform_angle();
        Reflection off = Reflection::unit(n);
        off.amplitude.setZero();

        const Reflection strongest = ofdm_strongest_cir(element_taps, direct);
        for (size_t pi = 0; pi < powers.size(); ++pi) {
            const double pt = dbm_to_watt(powers[pi]);
            acc[pi][0] += ofdm_upper_bound(direct, element_taps, spec, pt, noise);
            const Reflection* schemes[3] = {&strongest, &rand_refl, &off};
            for (int m = 0; m < 3; ++m) {
                const Eigen::VectorXd p = ofdm_water_fill(*schemes[m], direct,
                                                          element_taps, spec, pt, noise);
                acc[pi][m + 1] +=
                    ofdm_rate(*schemes[m], p, direct, element_taps, spec, noise, pt);
            }
        }
    }

    ExperimentResult r = begin_result("fig10", s, seed);
    r.metadata.emplace_back("trials", std::to_string(s.trials));
    r.metadata.emplace_back("subcarriers", std::to_string(spec.subcarriers));
    r.columns = {"power_dbm", "method", "mean_rate_bps_hz"};
    for (size_t pi = 0; pi < powers.size(); ++pi)
        for (int m = 0; m < 4; ++m)
            r.rows.push_back({Cell(powers[pi]), Cell(std::string(kMethods[m])),
                              Cell(acc[pi][m] / double(s.trials))});
    return r;
}

// ------------------------------------------------------------------- fig12

void validate_fig12(const Scenario& s) {
    require(!s.element_grid.empty(), "fig12 needs element_grid");
    need_tx_power(s, "fig12");
    need_noise(s, "fig12");
    need_link(s, "fig12", "ap_irs");
    need_link(s, "fig12", "irs_user");
}

ExperimentResult run_fig12(const Scenario& s, std::uint64_t seed) {
    validate_fig12(s);
    const double pt = need_tx_power(s, "fig12");
    const double noise = need_noise(s, "fig12");
    const FadingSpec hop_g = s.link("ap_irs").fading();
    const FadingSpec hop_h = s.link("irs_user").fading();
    const auto& grid = s.element_grid;
    const std::uint64_t trials = std::uint64_t(s.trials);
    static const char* kMethods[] = {"continuous", "phase_1bit", "phase_2bit",
                                     "amp_1bit"};

    ExperimentResult r = begin_result("fig12", s, seed);
    r.metadata.emplace_back("trials", std::to_string(s.trials));
    r.columns = {"n", "method", "mean_snr_db"};

    for (size_t ni = 0; ni < grid.size(); ++ni) {
        const int n = grid[ni];
        std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
        for (std::uint64_t t = 0; t < trials; ++t) {
            Rng rng(trial_seed(seed, ni * trials + t));
            const Eigen::VectorXcd g = draw_vec(hop_g, n, rng, LinkRole::ap_irs);
            const Eigen::VectorXcd h = draw_vec(hop_h, n, rng, LinkRole::irs_user);
            const Reflection cont = siso_align(h, g, cd{0.0, 0.0});
            acc[0] += receive_snr(cd{0.0, 0.0}, h, g, cont, pt, noise);
            acc[1] += receive_snr(cd{0.0, 0.0}, h, g, quantize_reflection(cont, 1), pt,
                                  noise);
            acc[2] += receive_snr(cd{0.0, 0.0}, h, g, quantize_reflection(cont, 2), pt,
                                  noise);
            acc[3] += receive_snr(cd{0.0, 0.0}, h, g, one_bit_amplitude(h, g), pt, noise);
        }
        for (int m = 0; m < 4; ++m)
            r.rows.push_back({Cell((long long)n), Cell(std::string(kMethods[m])),
                              Cell(linear_to_db(acc[m] / double(trials)))});
    }
    return r;
}

// ------------------------------------------------------------------- fig15

void validate_fig15(const Scenario& s) {
    require(s.estimation.has_value(), "fig15 needs the estimation block");
    require(!s.estimation->group_counts.empty(), "fig15 needs estimation.group_counts");
    require(!s.estimation->patterns.empty(), "fig15 needs estimation.patterns");
}

ExperimentResult run_fig15(const Scenario& s, std::uint64_t seed) {
    validate_fig15(s);
    const EstimationConfig& e = *s.estimation;
    GroupingStudySpec spec;
    spec.grid_rows = e.grid_rows;
    spec.grid_cols = e.grid_cols;
    spec.pilot_snr_db = e.pilot_snr_db;
    spec.data_snr_db = e.data_snr_db;
    spec.correlation = e.correlation;
    spec.trials = s.trials;
    spec.phase_levels = e.phase_levels;

    const auto points =
        rate_vs_grouping(spec, e.group_counts, e.coherence, e.patterns, seed);

    ExperimentResult r = begin_result("fig15", s, seed);
    r.metadata.emplace_back("trials", std::to_string(s.trials));
    r.metadata.emplace_back("coherence", std::to_string(e.coherence));
    r.metadata.emplace_back("correlation", fmt(e.correlation));
    r.columns = {"rho", "pattern", "mean_rate_bps_hz"};
    for (const auto& p : points)
        r.rows.push_back({Cell(p.rho), Cell(pattern_name(p.kind)), Cell(p.rate)});
    return r;
}

// ------------------------------------------------------------------- fig18

void validate_fig18(const Scenario& s) {
    require(s.elements >= 1, "fig18 needs elements >= 1");
    require(s.placement.has_value(), "fig18 needs the placement block");
    require(!s.placement->standoff_grid.empty(), "fig18 needs placement.standoff_grid");
    need_tx_power(s, "fig18");
    need_noise(s, "fig18");
}

ExperimentResult run_fig18(const Scenario& s, std::uint64_t seed) {
    validate_fig18(s);
    const double pt = need_tx_power(s, "fig18");
    const double noise = need_noise(s, "fig18");
    const PlacementConfig& p = *s.placement;
    const double beta0 = db_to_linear(p.ref_gain_db);
    const double paired =
        double_irs_snr(pt, beta0, s.elements, p.span, p.height, noise);

    ExperimentResult r = begin_result("fig18", s, seed);
    r.metadata.emplace_back("elements", std::to_string(s.elements));
    r.metadata.emplace_back("threshold_elements",
                            fmt(cooperation_threshold(p.height, beta0)));
    r.columns = {"standoff_m", "deployment", "snr_db"};
    for (double d : p.standoff_grid) {
        const double single =
            single_irs_snr(pt, beta0, s.elements, d, p.span, p.height, noise);
        r.rows.push_back({Cell(d), Cell(std::string("single")),
                          Cell(linear_to_db(single))});
        r.rows.push_back({Cell(d), Cell(std::string("double")),
                          Cell(linear_to_db(paired))});
    }
    return r;
}

// ------------------------------------------------------------------- fig20

void validate_fig20(const Scenario& s) {
    require(s.mac.has_value(), "fig20 needs the mac block");
    require(s.mac->user_span.size() == 2, "fig20 needs exactly two users");
    require(s.elements >= 2 && s.elements % 2 == 0,
            "fig20 needs an even element count >= 2");
    need_tx_power(s, "fig20");
    need_noise(s, "fig20");
}

ExperimentResult run_fig20(const Scenario& s, std::uint64_t seed) {
    validate_fig20(s);
    const double pt = need_tx_power(s, "fig20");
    const double noise = need_noise(s, "fig20");
    const MacConfig& m = *s.mac;
    MacGeometry geom;
    geom.beta0_db = m.ref_gain_db;
    geom.terminal_gap = m.terminal_gap;
    geom.user_span = m.user_span;
    geom.user_angle_deg = m.user_angle_deg;

    const auto pairs = deployment_region_compare(geom, s.elements, pt, noise,
                                                 s.options, m.boundary_points,
                                                 m.ao_starts);

    ExperimentResult r = begin_result("fig20", s, seed);
    r.metadata.emplace_back("elements", std::to_string(s.elements));
    r.metadata.emplace_back("boundary_points", std::to_string(m.boundary_points));
    r.metadata.emplace_back("ao_starts", std::to_string(m.ao_starts));
    r.metadata.emplace_back("fdma_normalization", "bandwidth_scaled_noise");
    r.columns = {"scheme", "strategy", "r1", "r2"};
    for (const auto& pair : pairs) {
        const std::string scheme = scheme_name(pair.scheme);
        for (const auto& pt2 : pair.shared.boundary)
            r.rows.push_back(
                {Cell(scheme), Cell(std::string("centralized")), Cell(pt2.r1), Cell(pt2.r2)});
        for (const auto& pt2 : pair.dedicated.boundary)
            r.rows.push_back(
                {Cell(scheme), Cell(std::string("distributed")), Cell(pt2.r1), Cell(pt2.r2)});
    }
    return r;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = {"fig6",  "fig7",  "fig8",
                                                 "fig9",  "fig10", "fig12",
                                                 "fig15", "fig18", "fig20"};
    return ids;
}

bool is_experiment(const std::string& id) {
    const auto& ids = experiment_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

void validate_for_experiment(const std::string& id, const Scenario& s) {
    if (!is_experiment(id)) throw UnknownExperimentError("unknown experiment: " + id);
    if (id == "fig6" || id == "fig7") validate_siso_scaling(id, s);
    else if (id == "fig8") validate_fig8(s);
    else if (id == "fig9") validate_fig9(s);
    else if (id == "fig10") validate_fig10(s);
    else if (id == "fig12") validate_fig12(s);
    else if (id == "fig15") validate_fig15(s);
    else if (id == "fig18") validate_fig18(s);
    else if (id == "fig20") validate_fig20(s);
}

ExperimentResult run_experiment(const std::string& id, const Scenario& s,
                                std::uint64_t seed) {
    if (!is_experiment(id)) throw UnknownExperimentError("unknown experiment: " + id);
    if (id == "fig6") return run_siso_scaling(id, s, seed, false);
    if (id == "fig7") return run_siso_scaling(id, s, seed, true);
    if (id == "fig8") return run_fig8(s, seed);
    if (id == "fig9") return run_fig9(s, seed);
    if (id == "fig10") return run_fig10(s, seed);
    if (id == "fig12") return run_fig12(s, seed);
    if (id == "fig15") return run_fig15(s, seed);
    if (id == "fig18") return run_fig18(s, seed);
    return run_fig20(s, seed);
}

}  // namespace irssim

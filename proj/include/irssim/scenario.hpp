#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irssim/beamforming.hpp"
#include "irssim/channel.hpp"
#include "irssim/estimation.hpp"
#include "irssim/taps.hpp"

namespace irssim {

// Bad or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Experiment id not in the registry (CLI exit code 3).
struct UnknownExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Unreadable input or unwritable output (CLI exit code 4).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkConfig {
    FadingKind kind = FadingKind::rayleigh;
    double ref_gain_db = -30.0;
    double exponent = 2.0;
    double distance = 1.0;
    double rician_k = 0.0;  // linear
    int taps = 1;
    double tap_decay_db = 0.0;  // delay-profile decay per tap
    FadingSpec fading() const;
};

struct ModelVariant {
    std::string label;
    FadingKind kind = FadingKind::rayleigh;
    double exponent = 2.0;
    double rician_k = 0.0;
};

struct EstimationConfig {
    int grid_rows = 12;
    int grid_cols = 12;
    int coherence = 150;
    double pilot_snr_db = 5.0;
    double data_snr_db = 5.0;
    double correlation = 0.0;
    std::vector<int> group_counts;
    std::vector<PatternKind> patterns;
    int phase_levels = 2;
};

struct PlacementConfig {
    double ref_gain_db = -30.0;
    double span = 500.0;
    double height = 1.0;
    std::vector<double> standoff_grid;
};

struct MacConfig {
    double ref_gain_db = -30.0;
    double terminal_gap = 1.0;
    std::vector<double> user_span;
    std::vector<double> user_angle_deg;
    int boundary_points = 101;
    int ao_starts = 6;
};

// One parsed run configuration. Parsing is strict: any key the schema does
// not define is an error, as is a malformed unit string. Powers accept raw
// numbers (watts) or strings with a unit ("50 mW", "-90 dBm"); ratio fields
// accept raw numbers (linear) or "x dB".
struct Scenario {
    std::string description;
    int trials = 1;
    std::uint64_t base_seed = 0;
    int elements = 0;
    std::vector<int> element_grid;
    int tx_antennas = 1;
    int rx_antennas = 1;
    std::optional<double> transmit_power_w;
    std::vector<double> power_dbm_grid;
    std::optional<double> noise_power_w;
    std::map<std::string, LinkConfig> links;  // ap_user / ap_irs / irs_user
    std::vector<ModelVariant> channel_models;
    std::vector<double> distance_grid;
    double irs_along = 50.0;
    double irs_offset = 2.0;
    std::optional<OfdmSpec> ofdm;
    AoOptions options;
    std::optional<EstimationConfig> estimation;
    std::optional<PlacementConfig> placement;
    std::optional<MacConfig> mac;
    std::string digest;  // canonical-form hash, goes into output metadata

    const LinkConfig& link(const std::string& name) const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

double parse_power_text(const std::string& text);  // -> watts
double parse_ratio_text(const std::string& text);  // -> linear

}  // namespace irssim

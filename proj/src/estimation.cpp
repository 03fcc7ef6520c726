#include "irssim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace irssim {

namespace {

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

double snap_phase(double phase, int levels) {
    const double step = kTwoPi / double(levels);
    long k = long(std::ceil(phase / step - 0.5));
    k %= levels;
    if (k < 0) k += levels;
    return double(k) * step;
}

Eigen::MatrixXcd design_matrix(const TrainingPattern& pattern) {
    const Eigen::Index t = pattern.states.rows();
    Eigen::MatrixXcd phi(t, pattern.states.cols() + 1);
    phi.col(0).setOnes();
    phi.rightCols(pattern.states.cols()) = pattern.states;
    return phi;
}

}  // namespace

std::string pattern_name(PatternKind kind) {
    switch (kind) {
        case PatternKind::dft: return "dft";
        case PatternKind::onoff: return "onoff";
        case PatternKind::dft_quantized: return "dft_quantized";
        case PatternKind::random: return "random";
    }
    return "unknown";
}

TrainingPattern make_pattern(PatternKind kind, int n_bar, int phase_levels,
                             std::uint64_t seed) {
    if (n_bar < 1) throw std::invalid_argument("make_pattern: need at least one coefficient");
    if (kind == PatternKind::dft_quantized && phase_levels < 2)
        throw std::invalid_argument("make_pattern: quantized pattern needs >= 2 levels");
    const int t_len = n_bar + 1;
    TrainingPattern pat;
    pat.kind = kind;
    pat.states = Eigen::MatrixXcd::Zero(t_len, n_bar);
    switch (kind) {
        case PatternKind::dft:
        case PatternKind::dft_quantized:
            for (int t = 0; t < t_len; ++t)
                for (int n = 0; n < n_bar; ++n) {
                    double phase = wrap_angle(-kTwoPi * double(t) * double(n + 1) / double(t_len));
                    if (kind == PatternKind::dft_quantized)
                        phase = snap_phase(phase, phase_levels);
                    pat.states(t, n) = std::polar(1.0, phase);
                }
            if (kind == PatternKind::dft_quantized) pat.phase_levels = phase_levels;
            break;
        case PatternKind::onoff:
            for (int t = 1; t < t_len; ++t) pat.states(t, t - 1) = 1.0;
            break;
        case PatternKind::random: {
            Rng rng(seed);
            for (int t = 0; t < t_len; ++t)
                for (int n = 0; n < n_bar; ++n)
                    pat.states(t, n) = std::polar(1.0, rng.uniform_angle());
            break;
        }
    }
    return pat;
}

Eigen::VectorXcd simulate_pilots(const TrainingPattern& pattern, cd h_d,
                                 const Eigen::VectorXcd& cascaded,
                                 double pilot_power, double noise_power,
                                 Rng& rng) {
    if (cascaded.size() != pattern.states.cols())
        throw std::invalid_argument("simulate_pilots: coefficient count mismatch");
    if (pilot_power < 0.0 || noise_power < 0.0)
        throw std::invalid_argument("simulate_pilots: negative power");
    const double amp = std::sqrt(pilot_power);
    const double nsd = std::sqrt(noise_power);
    Eigen::VectorXcd y(pattern.states.rows());
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        cd s = h_d;
        for (Eigen::Index n = 0; n < cascaded.size(); ++n)
            s += pattern.states(t, n) * cascaded[n];
        y[t] = amp * s + nsd * rng.cgauss();
    }
    return y;
}

EstimationResult ls_estimate(const TrainingPattern& pattern,
                             const Eigen::VectorXcd& observations,
                             double pilot_power) {
    if (observations.size() != pattern.states.rows())
        throw std::invalid_argument("ls_estimate: observation count mismatch");
    if (!(pilot_power > 0.0))
        throw std::invalid_argument("ls_estimate: pilot power must be positive");
    const Eigen::MatrixXcd phi = design_matrix(pattern);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(phi);
    if (qr.rank() < phi.cols())
        throw std::runtime_error("ls_estimate: rank-deficient " +
                                 pattern_name(pattern.kind) + " pattern");
    const Eigen::VectorXcd x = qr.solve(observations) / std::sqrt(pilot_power);

    EstimationResult out;
    out.direct = x[0];
    out.cascaded = x.tail(x.size() - 1);
    const Eigen::VectorXcd fit = std::sqrt(pilot_power) * (phi * x);
    out.residual = std::sqrt((observations - fit).squaredNorm() /
                             double(observations.size()));
    return out;
}

Eigen::VectorXd ls_error_variances(const TrainingPattern& pattern,
                                   double pilot_power, double noise_power) {
    if (!(pilot_power > 0.0) || noise_power < 0.0)
        throw std::invalid_argument("ls_error_variances: bad powers");
    const Eigen::MatrixXcd phi = design_matrix(pattern);
    const Eigen::MatrixXcd gram = phi.adjoint() * phi;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible())
        throw std::runtime_error("ls_error_variances: rank-deficient " +
                                 pattern_name(pattern.kind) + " pattern");
    const Eigen::MatrixXcd inv = lu.inverse();
    Eigen::VectorXd out(phi.cols());
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = noise_power * std::real(inv(i, i)) / pilot_power;
    return out;
}

GroupingMap make_grouping(int rows, int cols, int tile_rows, int tile_cols) {
    if (rows < 1 || cols < 1 || tile_rows < 1 || tile_cols < 1)
        throw std::invalid_argument("make_grouping: non-positive dimension");
    if (rows % tile_rows != 0 || cols % tile_cols != 0)
        throw std::invalid_argument("make_grouping: tiles must divide the grid");
    GroupingMap map;
    map.rows = rows;
    map.cols = cols;
    map.tile_rows = tile_rows;
    map.tile_cols = tile_cols;
    map.group_of.resize(size_t(rows) * size_t(cols));
    const int tiles_per_row = cols / tile_cols;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            map.group_of[size_t(r) * cols + c] =
                (r / tile_rows) * tiles_per_row + (c / tile_cols);
    return map;
}

const std::vector<int>& grouping_12x12_counts() {
    static const std::vector<int> counts = {1, 2, 4, 6, 9, 12, 16, 24, 36, 48, 72, 144};
    return counts;
}

GroupingMap grouping_12x12(int groups) {
    static const std::map<int, std::pair<int, int>> tiles = {
        {1, {12, 12}}, {2, {12, 6}}, {4, {6, 6}},  {6, {6, 4}},
        {9, {4, 4}},   {12, {4, 3}}, {16, {3, 3}}, {24, {3, 2}},
        {36, {2, 2}},  {48, {3, 1}}, {72, {2, 1}}, {144, {1, 1}}};
    const auto it = tiles.find(groups);
    if (it == tiles.end())
        throw std::invalid_argument("grouping_12x12: unsupported group count");
    return make_grouping(12, 12, it->second.first, it->second.second);
}

Eigen::VectorXcd group_channels(const Eigen::VectorXcd& per_element,
                                const GroupingMap& map) {
    if (per_element.size() != map.elements())
        throw std::invalid_argument("group_channels: element count mismatch");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(map.groups());
    for (Eigen::Index n = 0; n < per_element.size(); ++n)
        out[map.group_of[size_t(n)]] += per_element[n];
    return out;
}

long min_training_multiuser(int k_users, int n_elements, int m_b) {
    if (k_users < 1 || n_elements < 1 || m_b < 1)
        throw std::invalid_argument("min_training_multiuser: non-positive argument");
    const long k = k_users, n = n_elements, mb = m_b;
    const long spatial = ((k - 1) * n + mb - 1) / mb;  // ceil((K-1)N / M_B)
    return k + n + std::max(k - 1, spatial);
}

int max_users_ofdm(int n_elements, int subcarriers, int cir_length) {
    if (n_elements < 1 || cir_length < 1)
        throw std::invalid_argument("max_users_ofdm: non-positive argument");
    if (subcarriers <= cir_length)
        throw std::invalid_argument("max_users_ofdm: need more subcarriers than taps");
    const long n = n_elements, q = subcarriers, l = cir_length;
    return int((n + 1) * (q - l) / (n + l) + 1);
}

namespace {

GroupingMap grouping_for(int rows, int cols, int groups) {
    if (rows == 12 && cols == 12) return grouping_12x12(groups);
    // general grids: pick the most nearly square tiling with this group count
    int best_tr = -1, best_tc = -1, best_score = 1 << 30;
    for (int tr = 1; tr <= rows; ++tr) {
        if (rows % tr != 0) continue;
        for (int tc = 1; tc <= cols; ++tc) {
            if (cols % tc != 0) continue;
            if ((rows / tr) * (cols / tc) != groups) continue;
            const int score = std::abs(tr - tc);
            if (score < best_score || (score == best_score && tr > best_tr)) {
                best_score = score;
                best_tr = tr;
                best_tc = tc;
            }
        }
    }
    if (best_tr < 0)
        throw std::invalid_argument("rate_vs_grouping: no tiling with requested group count");
    return make_grouping(rows, cols, best_tr, best_tc);
}

}  // namespace

std::vector<GroupingRatePoint> rate_vs_grouping(
    const GroupingStudySpec& spec, const std::vector<int>& group_counts,
    int coherence, const std::vector<PatternKind>& kinds, std::uint64_t seed) {
    if (spec.grid_rows < 1 || spec.grid_cols < 1)
        throw std::invalid_argument("rate_vs_grouping: bad grid");
    if (spec.trials < 1) throw std::invalid_argument("rate_vs_grouping: trials < 1");
    if (spec.correlation < 0.0 || spec.correlation > 1.0)
        throw std::invalid_argument("rate_vs_grouping: correlation outside [0,1]");
    if (group_counts.empty() || kinds.empty())
        throw std::invalid_argument("rate_vs_grouping: empty sweep");
    const int n = spec.grid_rows * spec.grid_cols;
    for (int g : group_counts)
        if (g + 1 > coherence)
            throw std::invalid_argument("rate_vs_grouping: training exceeds the coherence block");

    std::vector<GroupingMap> maps;
    maps.reserve(group_counts.size());
    for (int g : group_counts) maps.push_back(grouping_for(spec.grid_rows, spec.grid_cols, g));

    const double pilot_power = std::pow(10.0, spec.pilot_snr_db / 10.0);
    const double data_power = std::pow(10.0, spec.data_snr_db / 10.0);
    const double sigma2 = 1.0;
    const double k_corr = spec.correlation;

    // sums[kind][group index]
    std::vector<std::vector<double>> sums(kinds.size(),
                                          std::vector<double>(group_counts.size(), 0.0));

    for (int trial = 0; trial < spec.trials; ++trial) {
        Rng chan_rng(trial_seed(seed, 3 * std::uint64_t(trial)));
        const cd h_d = chan_rng.cgauss();
        Eigen::VectorXcd indep(n);
        const double elem_sd = std::sqrt(1.0 / double(n));
        for (int i = 0; i < n; ++i) indep[i] = elem_sd * chan_rng.cgauss();

        for (size_t gi = 0; gi < maps.size(); ++gi) {
            const GroupingMap& map = maps[gi];
            Eigen::VectorXcd c = std::sqrt(1.0 - k_corr) * indep;
            if (k_corr > 0.0) {
                Rng tile_rng(mix64(trial_seed(seed, 3 * std::uint64_t(trial) + 1) +
                                   std::uint64_t(gi)));
                Eigen::VectorXcd shared(map.groups());
                for (Eigen::Index g = 0; g < shared.size(); ++g)
                    shared[g] = elem_sd * tile_rng.cgauss();
                for (int e = 0; e < n; ++e)
                    c[e] += std::sqrt(k_corr) * shared[map.group_of[size_t(e)]];
            }
            const Eigen::VectorXcd grouped = group_channels(c, map);
            const int n_bar = map.groups();
            const double keep = std::max(0.0, 1.0 - double(n_bar + 1) / double(coherence));

            for (size_t ki = 0; ki < kinds.size(); ++ki) {
                const std::uint64_t local =
                    mix64(trial_seed(seed, 3 * std::uint64_t(trial) + 2) +
                          1000003ULL * std::uint64_t(gi) + 7919ULL * std::uint64_t(ki));
                TrainingPattern pat =
                    make_pattern(kinds[ki], n_bar, spec.phase_levels, local);
                Rng noise_rng(mix64(local + 0x517CC1B727220A95ULL));
                const Eigen::VectorXcd y =
                    simulate_pilots(pat, h_d, grouped, pilot_power, sigma2, noise_rng);
                const EstimationResult est = ls_estimate(pat, y, pilot_power);

                const double ref =
                    (est.direct == cd{0.0, 0.0}) ? 0.0 : std::arg(est.direct);
                cd eff = h_d;
                for (Eigen::Index g = 0; g < grouped.size(); ++g) {
                    const double theta =
                        (est.cascaded[g] == cd{0.0, 0.0})
                            ? 0.0
                            : wrap_angle(ref - std::arg(est.cascaded[g]));
                    eff += std::polar(1.0, theta) * grouped[g];
                }
                sums[ki][gi] += keep * std::log2(1.0 + data_power * std::norm(eff) / sigma2);
            }
        }
    }

    std::vector<GroupingRatePoint> out;
    out.reserve(kinds.size() * group_counts.size());
    for (size_t ki = 0; ki < kinds.size(); ++ki)
        for (size_t gi = 0; gi < group_counts.size(); ++gi) {
            GroupingRatePoint p;
            p.rho = double(group_counts[gi]) / double(n);
            p.kind = kinds[ki];
            p.rate = sums[ki][gi] / double(spec.trials);
            out.push_back(p);
        }
    return out;
}

}  // namespace irssim

#include "irssim/ofdm.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace irssim {

namespace {

Eigen::Index longest_length(const std::vector<TapChannel>& element_taps,
                            const TapChannel& direct) {
    Eigen::Index len = direct.length();
    for (const auto& t : element_taps) len = std::max(len, t.length());
    return len;
}

cd tap_at(const TapChannel& ch, Eigen::Index l) {
    return l < ch.length() ? ch.taps[l] : cd{0.0, 0.0};
}

Eigen::VectorXcd cfr_of(const Reflection& refl, const TapChannel& direct,
                        const std::vector<TapChannel>& element_taps,
                        const OfdmSpec& spec) {
    if (Eigen::Index(element_taps.size()) != refl.size())
        throw std::invalid_argument("ofdm: reflection size mismatch");
    return cfr_from_taps(composite_taps(direct, element_taps, refl), spec);
}

}  // namespace

Reflection ofdm_strongest_cir(const std::vector<TapChannel>& element_taps,
                              const TapChannel& direct) {
    const Eigen::Index len = longest_length(element_taps, direct);
    if (len == 0) throw std::invalid_argument("ofdm_strongest_cir: empty channel");

    Eigen::Index best = 0;
    double best_sum = -1.0;
    for (Eigen::Index l = 0; l < len; ++l) {
        double s = std::abs(tap_at(direct, l));
        for (const auto& t : element_taps) s += std::abs(tap_at(t, l));
        if (s > best_sum) {  // strict: ties keep the smallest delay
            best_sum = s;
            best = l;
        }
    }

    Reflection refl = Reflection::unit(Eigen::Index(element_taps.size()));
    const cd d = tap_at(direct, best);
    const double ref_phase = (d == cd{0.0, 0.0}) ? 0.0 : std::arg(d);
    for (Eigen::Index n = 0; n < refl.size(); ++n) {
        const cd v = tap_at(element_taps[size_t(n)], best);
        if (v == cd{0.0, 0.0}) continue;
        double t = std::fmod(ref_phase - std::arg(v), kTwoPi);
        if (t < 0.0) t += kTwoPi;
        refl.phase[n] = t;
    }
    return refl;
}

double ofdm_rate(const Reflection& refl, const Eigen::VectorXd& powers,
                 const TapChannel& direct,
                 const std::vector<TapChannel>& element_taps,
                 const OfdmSpec& spec, double noise_power, double power_budget) {
    if (powers.size() != spec.subcarriers)
        throw std::invalid_argument("ofdm_rate: power vector length mismatch");
    if (!(noise_power > 0.0)) throw std::invalid_argument("ofdm_rate: bad noise");
    double total = 0.0;
    for (Eigen::Index q = 0; q < powers.size(); ++q) {
        if (powers[q] < 0.0) throw std::invalid_argument("ofdm_rate: negative power");
        total += powers[q];
    }
    if (total > power_budget * (1.0 + 1e-9))
        throw std::invalid_argument("ofdm_rate: power budget exceeded");

    const Eigen::VectorXcd c = cfr_of(refl, direct, element_taps, spec);
    double acc = 0.0;
    for (Eigen::Index q = 0; q < c.size(); ++q)
        acc += std::log2(1.0 + powers[q] * std::norm(c[q]) / noise_power);
    return acc / double(spec.subcarriers);
}

double ofdm_upper_bound(const TapChannel& direct,
                        const std::vector<TapChannel>& element_taps,
                        const OfdmSpec& spec, double tx_power,
                        double noise_power) {
    if (!(tx_power > 0.0) || !(noise_power > 0.0))
        throw std::invalid_argument("ofdm_upper_bound: power and noise must be positive");
    const Eigen::Index q_count = spec.subcarriers;
    const Eigen::VectorXcd d = cfr_from_taps(direct, spec);

    // per-subcarrier best magnitude: all element responses phase-aligned
    Eigen::VectorXd best_mag = d.cwiseAbs();
    for (const auto& t : element_taps) {
        const Eigen::VectorXcd v = cfr_from_taps(t, spec);
        best_mag += v.cwiseAbs();
    }

    const Eigen::VectorXd gains = best_mag.array().square();
    if (gains.maxCoeff() <= 0.0) return 0.0;
    const Eigen::VectorXd p = water_fill(gains, tx_power, noise_power);
    double acc = 0.0;
    for (Eigen::Index q = 0; q < q_count; ++q)
        acc += std::log2(1.0 + p[q] * gains[q] / noise_power);
    return acc / double(q_count);
}

Eigen::VectorXd ofdm_water_fill(const Reflection& refl,
                                const TapChannel& direct,
                                const std::vector<TapChannel>& element_taps,
                                const OfdmSpec& spec, double tx_power,
                                double noise_power) {
    if (!(tx_power > 0.0) || !(noise_power > 0.0))
        throw std::invalid_argument("ofdm_water_fill: power and noise must be positive");
    const Eigen::VectorXcd c = cfr_of(refl, direct, element_taps, spec);
    const Eigen::VectorXd gains = c.cwiseAbs2();
    if (gains.maxCoeff() <= 0.0)
        return Eigen::VectorXd::Constant(spec.subcarriers, tx_power / double(spec.subcarriers));
    return water_fill(gains, tx_power, noise_power);
}

}  // namespace irssim

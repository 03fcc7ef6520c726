#include "irssim/taps.hpp"

#include <cmath>
#include <stdexcept>

namespace irssim {

TapChannel gen_tap_channel(const FadingSpec& spec, int n_taps, Rng& rng) {
    if (n_taps < 1) throw std::invalid_argument("gen_tap_channel: need >= 1 tap");
    if (spec.tap_decay_db < 0.0)
        throw std::invalid_argument("gen_tap_channel: negative profile decay");
    const double pl = path_loss(spec.path_loss, spec.distance);

    double k = 0.0;
    switch (spec.kind) {
        case FadingKind::los: k = std::numeric_limits<double>::infinity(); break;
        case FadingKind::rayleigh: k = 0.0; break;
        case FadingKind::rician:
            if (spec.rician_k < 0.0)
                throw std::invalid_argument("gen_tap_channel: negative rician factor");
            k = spec.rician_k;
            break;
    }

    TapChannel out;
    out.taps = Eigen::VectorXcd::Zero(n_taps);
    if (std::isinf(k)) {
        out.taps[0] = std::sqrt(pl) * std::polar(1.0, std::fmod(kTwoPi * spec.distance / kWavelength, kTwoPi));
        return out;
    }
    // per-tap average powers follow a geometric profile, r^l with
    // r = 10^(-decay/10), normalized so the diffuse part totals pl/(k+1)
    const double r = std::pow(10.0, -spec.tap_decay_db / 10.0);
    Eigen::VectorXd weight(n_taps);
    for (int l = 0; l < n_taps; ++l) weight[l] = std::pow(r, l);
    weight /= weight.sum();

    const double los_pow = pl * k / (k + 1.0);
    const double nlos_pow = pl / (k + 1.0);
    out.taps[0] = std::sqrt(los_pow) *
                  std::polar(1.0, std::fmod(kTwoPi * spec.distance / kWavelength, kTwoPi));
    for (int l = 0; l < n_taps; ++l)
        out.taps[l] += std::sqrt(nlos_pow * weight[l]) * rng.cgauss();
    return out;
}

TapChannel cascade_taps(const TapChannel& irs_user, const TapChannel& ap_irs,
                        cd coeff) {
    const Eigen::Index l2 = irs_user.length(), l1 = ap_irs.length();
    if (l1 == 0 || l2 == 0)
        throw std::invalid_argument("cascade_taps: empty tap vector");
    TapChannel out;
    out.taps = Eigen::VectorXcd::Zero(l1 + l2 - 1);
    for (Eigen::Index a = 0; a < l2; ++a)
        for (Eigen::Index b = 0; b < l1; ++b)
            out.taps[a + b] += irs_user.taps[a] * ap_irs.taps[b];
    out.taps *= coeff;
    return out;
}

TapChannel composite_taps(const TapChannel& direct,
                          const std::vector<TapChannel>& element_taps,
                          const Reflection& refl) {
    if (Eigen::Index(element_taps.size()) != refl.size())
        throw std::invalid_argument("composite_taps: element count mismatch");
    Eigen::Index len = direct.length();
    for (const auto& e : element_taps) len = std::max(len, e.length());
    TapChannel out;
    out.taps = Eigen::VectorXcd::Zero(len);
    out.taps.head(direct.length()) = direct.taps;
    for (size_t n = 0; n < element_taps.size(); ++n) {
        const cd c = std::polar(refl.amplitude[Eigen::Index(n)], refl.phase[Eigen::Index(n)]);
        out.taps.head(element_taps[n].length()) += c * element_taps[n].taps;
    }
    return out;
}

Eigen::VectorXcd cfr_from_taps(const TapChannel& ch, const OfdmSpec& spec) {
    const int q = spec.subcarriers;
    if (q < 1) throw std::invalid_argument("cfr_from_taps: need >= 1 subcarrier");
    if (ch.length() > q)
        throw std::invalid_argument("cfr_from_taps: impulse response longer than symbol");
    if (ch.length() > spec.cp_length)
        throw std::invalid_argument("cfr_from_taps: cyclic prefix shorter than channel");
    Eigen::VectorXcd c(q);
    for (int sub = 0; sub < q; ++sub) {
        cd acc{0.0, 0.0};
        for (Eigen::Index l = 0; l < ch.length(); ++l)
            acc += ch.taps[l] * std::polar(1.0, -kTwoPi * double(sub) * double(l) / double(q));
        c[sub] = acc;
    }
    return c;
}

}  // namespace irssim

#include "irssim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace irssim {

Eigen::VectorXcd Reflection::coeffs() const {
    Eigen::VectorXcd c(amplitude.size());
    for (Eigen::Index n = 0; n < amplitude.size(); ++n)
        c[n] = std::polar(amplitude[n], phase[n]);
    return c;
}

Reflection Reflection::unit(Eigen::Index n) {
    Reflection r;
    r.amplitude = Eigen::VectorXd::Ones(n);
    r.phase = Eigen::VectorXd::Zero(n);
    return r;
}

void validate(const Reflection& refl) {
    if (refl.amplitude.size() != refl.phase.size())
        throw std::invalid_argument("reflection: amplitude/phase length mismatch");
    for (Eigen::Index n = 0; n < refl.size(); ++n) {
        const double b = refl.amplitude[n];
        const double t = refl.phase[n];
        if (!(b >= 0.0 && b <= 1.0))
            throw std::invalid_argument("reflection: amplitude outside [0,1]");
        if (!(t >= 0.0 && t < kTwoPi))
            throw std::invalid_argument("reflection: phase outside [0,2pi)");
    }
    if (refl.phase_bits) {
        const int bits = *refl.phase_bits;
        if (bits < 0 || bits > 30)
            throw std::invalid_argument("reflection: bad phase bit width");
        const double step = kTwoPi / double(1 << bits);
        for (Eigen::Index n = 0; n < refl.size(); ++n) {
            const double k = refl.phase[n] / step;
            if (std::abs(k - std::round(k)) > 1e-9)
                throw std::invalid_argument("reflection: phase off the declared grid");
        }
    }
    if (refl.amplitude_levels) {
        const int levels = *refl.amplitude_levels;
        if (levels < 2)
            throw std::invalid_argument("reflection: need at least two amplitude levels");
        const double step = 1.0 / double(levels - 1);
        for (Eigen::Index n = 0; n < refl.size(); ++n) {
            const double k = refl.amplitude[n] / step;
            if (std::abs(k - std::round(k)) > 1e-9)
                throw std::invalid_argument("reflection: amplitude off the declared grid");
        }
    }
}

namespace {

// Plane-wave phase of entry (i,j): fixed propagation term plus linear
// progression across the half-wavelength grid.
cd los_entry(const FadingSpec& spec, Eigen::Index i, Eigen::Index j) {
    const double phase = kTwoPi * spec.distance / kWavelength +
                         kPi * (double(i) * spec.arrive_sin + double(j) * spec.depart_sin);
    return std::polar(1.0, std::fmod(phase, kTwoPi));
}

}  // namespace

FlatChannel gen_flat_channel(const FadingSpec& spec, Eigen::Index rows,
                             Eigen::Index cols, Rng& rng, LinkRole role) {
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("gen_flat_channel: negative dimension");
    if (spec.kind == FadingKind::rician && spec.rician_k < 0.0)
        throw std::invalid_argument("gen_flat_channel: negative rician factor");

    const double pl = path_loss(spec.path_loss, spec.distance);
    const double amp = std::sqrt(pl);

    FlatChannel out;
    out.role = role;
    out.h.resize(rows, cols);

    double los_w = 0.0, nlos_w = 0.0;
    switch (spec.kind) {
        case FadingKind::los:
            los_w = 1.0;
            break;
        case FadingKind::rayleigh:
            nlos_w = 1.0;
            break;
        case FadingKind::rician: {
            const double k = spec.rician_k;
            los_w = std::sqrt(k / (k + 1.0));
            nlos_w = std::sqrt(1.0 / (k + 1.0));
            break;
        }
    }

    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            cd v = los_w != 0.0 ? los_w * los_entry(spec, i, j) : cd{0.0, 0.0};
            if (nlos_w != 0.0) v += nlos_w * rng.cgauss();
            out.h(i, j) = amp * v;
        }
    }
    return out;
}

cd cascade_flat(const Eigen::VectorXcd& h_r, const Eigen::VectorXcd& g,
                const Reflection& refl, cd h_d) {
    if (h_r.size() != g.size() || h_r.size() != refl.size())
        throw std::invalid_argument("cascade_flat: length mismatch");
    cd acc = std::conj(h_d);
    for (Eigen::Index n = 0; n < h_r.size(); ++n)
        acc += std::conj(h_r[n]) * std::polar(refl.amplitude[n], refl.phase[n]) * g[n];
    return acc;
}

Eigen::MatrixXcd cascade_flat(const Eigen::MatrixXcd& H_r,
                              const Eigen::MatrixXcd& G,
                              const Reflection& refl,
                              const Eigen::MatrixXcd& H_d) {
    if (H_r.cols() != G.rows() || H_r.cols() != refl.size())
        throw std::invalid_argument("cascade_flat: element count mismatch");
    if (H_d.rows() != H_r.rows() || H_d.cols() != G.cols())
        throw std::invalid_argument("cascade_flat: direct channel shape mismatch");
    return H_d + H_r * refl.coeffs().asDiagonal() * G;
}

Eigen::RowVectorXcd miso_effective(const Eigen::VectorXcd& h_r,
                                   const Eigen::MatrixXcd& G,
                                   const Reflection& refl,
                                   const Eigen::VectorXcd& h_d) {
    if (h_r.size() != G.rows() || h_r.size() != refl.size())
        throw std::invalid_argument("miso_effective: element count mismatch");
    if (h_d.size() != G.cols())
        throw std::invalid_argument("miso_effective: antenna count mismatch");
    return h_r.adjoint() * refl.coeffs().asDiagonal() * G + h_d.adjoint();
}

}  // namespace irssim

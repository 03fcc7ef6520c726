#include "irssim/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irssim {

namespace {

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

constexpr double kGolden = 0.6180339887498949;

// Maximize a unimodal f on [a, b] to ~1e-10 of the bracket.
template <typename F>
double golden_max(F&& f, double a, double b) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

void check_ao_options(const AoOptions& opts) {
    if (opts.max_sweeps < 1) throw std::invalid_argument("ao: max_sweeps < 1");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("ao: tol must be positive");
    if (opts.phase_grid < 8) throw std::invalid_argument("ao: phase_grid < 8");
}

Eigen::VectorXd init_phases(Eigen::Index n, const AoOptions& opts) {
    if (opts.init == AoOptions::Init::random) {
        Rng rng(opts.init_seed);
        Eigen::VectorXd t(n);
        for (Eigen::Index i = 0; i < n; ++i) t[i] = rng.uniform_angle();
        return t;
    }
    return Eigen::VectorXd::Zero(n);
}

}  // namespace

Reflection siso_align(const Eigen::VectorXcd& h_r, const Eigen::VectorXcd& g,
                      cd h_d) {
    if (h_r.size() != g.size())
        throw std::invalid_argument("siso_align: length mismatch");
    const double zeta = (h_d == cd{0.0, 0.0}) ? 0.0 : std::arg(std::conj(h_d));
    Reflection refl = Reflection::unit(h_r.size());
    for (Eigen::Index n = 0; n < h_r.size(); ++n)
        refl.phase[n] = wrap_angle(zeta - std::arg(std::conj(h_r[n])) - std::arg(g[n]));
    return refl;
}

double receive_snr(cd h_d, const Eigen::VectorXcd& h_r,
                   const Eigen::VectorXcd& g, const Reflection& refl,
                   double tx_power, double noise_power) {
    if (tx_power < 0.0) throw std::invalid_argument("receive_snr: negative power");
    if (!(noise_power > 0.0)) throw std::invalid_argument("receive_snr: noise must be positive");
    const cd eff = cascade_flat(h_r, g, refl, h_d);
    return tx_power * std::norm(eff) / noise_power;
}

double rate_bps_hz(double snr) {
    if (snr < 0.0) throw std::invalid_argument("rate: negative snr");
    return std::log2(1.0 + snr);
}

double asymptotic_receive_power(int n_elements, double tx_power, double rho_h2,
                                double rho_g2) {
    if (n_elements < 0) throw std::invalid_argument("asymptotic power: negative N");
    const double n2 = double(n_elements) * double(n_elements);
    return n2 * tx_power * kPi * kPi * rho_h2 * rho_g2 / 16.0;
}

int required_elements(double d2, double exponent, double scale_const) {
    if (!(d2 > 0.0)) throw std::domain_error("required_elements: distance <= 0");
    if (!(scale_const > 0.0)) throw std::domain_error("required_elements: scale <= 0");
    return int(std::ceil(std::pow(d2, exponent / 2.0) * scale_const));
}

Eigen::VectorXcd mrt(const Eigen::VectorXcd& h, double tx_power) {
    const double nrm = h.norm();
    if (!(nrm > 0.0)) throw std::invalid_argument("mrt: zero channel");
    if (tx_power < 0.0) throw std::invalid_argument("mrt: negative power");
    return std::sqrt(tx_power) / nrm * h;
}

BeamformingSolution miso_ao(const Eigen::VectorXcd& h_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::VectorXcd& h_r, double tx_power,
                            double noise_power, const AoOptions& opts) {
    check_ao_options(opts);
    const Eigen::Index n = h_r.size();
    const Eigen::Index mt = G.cols();
    Reflection refl = Reflection::unit(n);
    refl.phase = init_phases(n, opts);
    if (opts.init == AoOptions::Init::aligned && n > 0 && mt > 0) {
        // co-phase against the precoder matched to the direct link
        Eigen::VectorXcd w0 = h_d.norm() > 0.0
                                  ? mrt(h_d, tx_power)
                                  : Eigen::VectorXcd::Constant(mt, std::sqrt(tx_power / double(mt)));
        const cd s = (h_d.adjoint() * w0)(0);
        const Eigen::VectorXcd t = G * w0;
        refl = siso_align(h_r, t, std::conj(s));
    }
    return miso_ao(h_d, G, h_r, tx_power, noise_power, opts, refl);
}

BeamformingSolution miso_ao(const Eigen::VectorXcd& h_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::VectorXcd& h_r, double tx_power,
                            double noise_power, const AoOptions& opts,
                            const Reflection& init) {
    check_ao_options(opts);
    if (G.rows() != h_r.size())
        throw std::invalid_argument("miso_ao: element count mismatch");
    if (G.cols() != h_d.size())
        throw std::invalid_argument("miso_ao: antenna count mismatch");
    if (init.size() != h_r.size())
        throw std::invalid_argument("miso_ao: init size mismatch");
    if (!(noise_power > 0.0)) throw std::invalid_argument("miso_ao: bad noise");
    const Eigen::Index n = h_r.size();
    const Eigen::Index mt = G.cols();

    Reflection refl = init;

    auto best_w = [&](const Reflection& r) -> Eigen::VectorXcd {
        Eigen::VectorXcd h_eff = miso_effective(h_r, G, r, h_d).adjoint();
        if (h_eff.norm() > 0.0) return mrt(h_eff, tx_power);
        return Eigen::VectorXcd::Constant(mt, std::sqrt(tx_power / double(mt)));
    };
    auto objective = [&](const Reflection& r, const Eigen::VectorXcd& w) {
        return std::norm((miso_effective(h_r, G, r, h_d) * w)(0));
    };

    BeamformingSolution sol;
    Eigen::VectorXcd w = best_w(refl);
    double obj = objective(refl, w);
    sol.objective_trace.push_back(obj);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        // exact phase step against the fixed precoder
        const cd s = (h_d.adjoint() * w)(0);
        const double ref_phase = (s == cd{0.0, 0.0}) ? 0.0 : std::arg(s);
        for (Eigen::Index i = 0; i < n; ++i) {
            const cd term = std::conj(h_r[i]) * (G.row(i) * w)(0);
            if (term == cd{0.0, 0.0}) continue;
            refl.phase[i] = wrap_angle(ref_phase - std::arg(term));
        }
        w = best_w(refl);
        const double next = objective(refl, w);
        sol.objective_trace.push_back(next);
        if (next - obj <= opts.tol * std::max(obj, 1e-300)) {
            obj = std::max(obj, next);
            sol.converged = true;
            break;
        }
        obj = next;
    }

    sol.reflection = refl;
    sol.tx_weights = w;
    sol.objective = sol.objective_trace.back();
    (void)noise_power;
    return sol;
}

double mimo_rate(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q,
                 double noise_power) {
    if (Q.rows() != H.cols() || Q.cols() != H.cols())
        throw std::invalid_argument("mimo_rate: covariance shape mismatch");
    if (!(noise_power > 0.0)) throw std::invalid_argument("mimo_rate: bad noise");
    const Eigen::Index mr = H.rows();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(mr, mr) + H * Q * H.adjoint() / noise_power;
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() == Eigen::Success) {
        double acc = 0.0;
        const auto& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < mr; ++i) acc += std::log2(std::real(l(i, i)));
        return 2.0 * acc;
    }
    return std::log2(std::max(std::real(m.partialPivLu().determinant()), 1e-300));
}

Eigen::VectorXd water_fill(const Eigen::VectorXd& gains, double total_power,
                           const Eigen::VectorXd& noise) {
    const Eigen::Index m = gains.size();
    if (noise.size() != m) throw std::invalid_argument("water_fill: noise length mismatch");
    if (!(total_power > 0.0)) throw std::invalid_argument("water_fill: budget must be positive");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool any = false;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (gains[i] < 0.0) throw std::invalid_argument("water_fill: negative gain");
        if (!(noise[i] > 0.0)) throw std::invalid_argument("water_fill: noise must be positive");
        if (gains[i] > 0.0) {
            const double floor = noise[i] / gains[i];
            lo = std::min(lo, floor);
            hi = std::max(hi, floor);
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("water_fill: all gains are zero");
    hi += total_power;

    auto filled = [&](double mu, Eigen::VectorXd& p) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            p[i] = gains[i] > 0.0 ? std::max(0.0, mu - noise[i] / gains[i]) : 0.0;
            sum += p[i];
        }
        return sum;
    };

    Eigen::VectorXd p(m);
    for (int it = 0; it < 200; ++it) {
        const double mu = 0.5 * (lo + hi);
        const double sum = filled(mu, p);
        if (std::abs(sum - total_power) <= 1e-9 * total_power) return p;
        (sum > total_power ? hi : lo) = mu;
    }
    filled(0.5 * (lo + hi), p);
    return p;
}

Eigen::VectorXd water_fill(const Eigen::VectorXd& gains, double total_power,
                           double noise) {
    return water_fill(gains, total_power,
                      Eigen::VectorXd::Constant(gains.size(), noise));
}

BeamformingSolution mimo_ao(const Eigen::MatrixXcd& H_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::MatrixXcd& H_r, double tx_power,
                            double noise_power, const AoOptions& opts) {
    check_ao_options(opts);
    Reflection refl = Reflection::unit(H_r.cols());
    refl.phase = init_phases(H_r.cols(), opts);
    return mimo_ao(H_d, G, H_r, tx_power, noise_power, opts, refl);
}

BeamformingSolution mimo_ao(const Eigen::MatrixXcd& H_d,
                            const Eigen::MatrixXcd& G,
                            const Eigen::MatrixXcd& H_r, double tx_power,
                            double noise_power, const AoOptions& opts,
                            const Reflection& init) {
    check_ao_options(opts);
    const Eigen::Index n = H_r.cols();
    const Eigen::Index mt = H_d.cols();
    if (G.rows() != n || G.cols() != mt || H_r.rows() != H_d.rows())
        throw std::invalid_argument("mimo_ao: channel shape mismatch");
    if (H_d.rows() < 1 || mt < 1)
        throw std::invalid_argument("mimo_ao: need at least one antenna per end");
    if (init.size() != n)
        throw std::invalid_argument("mimo_ao: init size mismatch");
    if (!(tx_power > 0.0) || !(noise_power > 0.0))
        throw std::invalid_argument("mimo_ao: power and noise must be positive");

    Reflection refl = init;

    Eigen::MatrixXcd Q = tx_power / double(mt) * Eigen::MatrixXcd::Identity(mt, mt);
    Eigen::MatrixXcd Ht = cascade_flat(H_r, G, refl, H_d);

    auto update_q = [&](const Eigen::MatrixXcd& H) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinV);
        Eigen::VectorXd gains = svd.singularValues().array().square();
        if (gains.maxCoeff() <= 0.0)
            return Eigen::MatrixXcd(tx_power / double(mt) * Eigen::MatrixXcd::Identity(mt, mt));
        Eigen::VectorXd p = water_fill(gains, tx_power, noise_power);
        const Eigen::MatrixXcd v = svd.matrixV();
        return Eigen::MatrixXcd(v * p.asDiagonal() * v.adjoint());
    };

    Q = update_q(Ht);
    BeamformingSolution sol;
    double obj = mimo_rate(Ht, Q, noise_power);
    sol.objective_trace.push_back(obj);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (Eigen::Index e = 0; e < n; ++e) {
            const Eigen::VectorXcd u = H_r.col(e);
            const Eigen::RowVectorXcd v = G.row(e);
            const Eigen::MatrixXcd base =
                Ht - std::polar(refl.amplitude[e], refl.phase[e]) * u * v;
            auto f = [&](double theta) {
                return mimo_rate(base + std::polar(refl.amplitude[e], theta) * u * v, Q,
                                 noise_power);
            };
            const double step = kTwoPi / double(opts.phase_grid);
            int best_k = 0;
            double best_f = f(0.0);
            for (int k = 1; k < opts.phase_grid; ++k) {
                const double fk = f(double(k) * step);
                if (fk > best_f) { best_f = fk; best_k = k; }
            }
            const double center = double(best_k) * step;
            double theta = golden_max(f, center - step, center + step);
            if (f(theta) < best_f) theta = center;
            refl.phase[e] = wrap_angle(theta);
            Ht = base + std::polar(refl.amplitude[e], refl.phase[e]) * u * v;
        }
        Q = update_q(Ht);
        const double next = mimo_rate(Ht, Q, noise_power);
        sol.objective_trace.push_back(next);
        if (next - obj <= opts.tol * std::max(std::abs(obj), 1e-300)) {
            obj = std::max(obj, next);
            sol.converged = true;
            break;
        }
        obj = next;
    }

    sol.reflection = refl;
    sol.tx_covariance = Q;
    sol.objective = sol.objective_trace.back();
    return sol;
}

Reflection quantize_reflection(const Reflection& refl, int phase_bits) {
    if (phase_bits < 1 || phase_bits > 30)
        throw std::invalid_argument("quantize_reflection: bad bit width");
    const long levels = 1L << phase_bits;
    const double step = kTwoPi / double(levels);
    Reflection out = refl;
    for (Eigen::Index i = 0; i < refl.size(); ++i) {
        // nearest level, exact midpoints to the smaller index
        long k = long(std::ceil(refl.phase[i] / step - 0.5));
        k %= levels;
        if (k < 0) k += levels;
        out.phase[i] = double(k) * step;
    }
    out.phase_bits = phase_bits;
    return out;
}

Reflection discrete_phase_descent(const Eigen::VectorXcd& h_d,
                                  const Eigen::MatrixXcd& G,
                                  const Eigen::VectorXcd& h_r,
                                  const Reflection& continuous, int phase_bits,
                                  int starts) {
    const Eigen::Index n = continuous.size();
    if (G.rows() != n || G.rows() != h_r.size() || G.cols() != h_d.size())
        throw std::invalid_argument("discrete_phase_descent: dimension mismatch");
    if (phase_bits < 1 || phase_bits > 30)
        throw std::invalid_argument("discrete_phase_descent: bad bit width");
    if (starts < 1)
        throw std::invalid_argument("discrete_phase_descent: starts < 1");
    const long levels = 1L << phase_bits;
    const double step = kTwoPi / double(levels);

    // fixed per-element row contributions at zero phase
    std::vector<Eigen::RowVectorXcd> v(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        v[size_t(i)] =
            continuous.amplitude[i] * std::conj(h_r[i]) * G.row(i);

    Reflection best;
    double best_power = -1.0;
    for (int s = 0; s < starts; ++s) {
        Reflection shifted = continuous;
        const double offset = step * double(s) / double(starts);
        for (Eigen::Index i = 0; i < n; ++i) {
            double th = shifted.phase[i] + offset;
            if (th >= kTwoPi) th -= kTwoPi;
            shifted.phase[i] = th;
        }
        Reflection cand = quantize_reflection(shifted, phase_bits);

        Eigen::RowVectorXcd row = h_d.adjoint();
        for (Eigen::Index i = 0; i < n; ++i)
            row += std::polar(1.0, cand.phase[i]) * v[size_t(i)];
        double power = row.squaredNorm();
        // coordinate ascent: the best level for one element given the rest
        // maximizes Re(e^{j th} z) with z = v_i (row - own term)^H, i.e. the
        // grid point nearest to -arg(z); each accepted move raises the score,
        // so the loop terminates
        for (int sweep = 0; sweep < 100; ++sweep) {
            bool changed = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::RowVectorXcd& vi = v[size_t(i)];
                const double vnorm = vi.squaredNorm();
                if (vnorm == 0.0) continue;
                const cd cur = std::polar(1.0, cand.phase[i]);
                const Eigen::RowVectorXcd base = row - cur * vi;
                const cd z = (vi * base.adjoint())(0, 0);
                long k = long(std::ceil(-std::arg(z) / step - 0.5));
                k %= levels;
                if (k < 0) k += levels;
                const double th = double(k) * step;
                const cd next = std::polar(1.0, th);
                const double gain = std::real(next * z) - std::real(cur * z);
                if (gain > 1e-12 * (power + 1.0)) {
                    cand.phase[i] = th;
                    row = base + next * vi;
                    power = row.squaredNorm();
                    changed = true;
                }
            }
            if (!changed) break;
            row = h_d.adjoint();
            for (Eigen::Index i = 0; i < n; ++i)
                row += std::polar(1.0, cand.phase[i]) * v[size_t(i)];
            power = row.squaredNorm();
        }
        if (power > best_power) {
            best_power = power;
            best = cand;
        }
    }
    return best;
}

double quantization_loss(int phase_bits) {
    if (phase_bits < 1) throw std::invalid_argument("quantization_loss: bits < 1");
    const double levels = std::pow(2.0, phase_bits);
    const double s = levels / kPi * std::sin(kPi / levels);
    return s * s;
}

Reflection one_bit_amplitude(const Eigen::VectorXcd& h_r,
                             const Eigen::VectorXcd& g) {
    if (h_r.size() != g.size())
        throw std::invalid_argument("one_bit_amplitude: length mismatch");
    Reflection refl;
    refl.amplitude = Eigen::VectorXd::Zero(h_r.size());
    refl.phase = Eigen::VectorXd::Zero(h_r.size());
    for (Eigen::Index n = 0; n < h_r.size(); ++n) {
        const double a = std::arg(std::conj(h_r[n]) * g[n]);
        if (a >= -kPi / 2.0 && a <= kPi / 2.0) refl.amplitude[n] = 1.0;
    }
    refl.phase_bits = 0;
    refl.amplitude_levels = 2;
    return refl;
}

}  // namespace irssim

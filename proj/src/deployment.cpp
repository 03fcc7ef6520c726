#include "irssim/deployment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irssim/rng.hpp"

namespace irssim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

double wrap_pm(double t) {  // to (-pi, pi]
    t = std::fmod(t, kTwoPi);
    if (t <= -kPi) t += kTwoPi;
    if (t > kPi) t -= kTwoPi;
    return t;
}

constexpr double kGolden = 0.6180339887498949;

template <typename F>
double golden_max(F&& f, double a, double b) {
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 70 && (b - a) > 1e-12; ++it) {
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

double rate_of(double snr) { return std::log2(1.0 + snr); }

// share a fraction of the band at full power, noise scaling with the share
double band_rate(double share, double snr) {
    if (share <= 0.0) return 0.0;
    return share * std::log2(1.0 + snr / share);
}

}  // namespace

double single_irs_snr(double power, double beta0, int n_elements, double d,
                      double span, double height, double noise) {
    if (!(power > 0.0) || !(beta0 > 0.0) || !(height > 0.0) || !(noise > 0.0) ||
        !(span > 0.0) || n_elements < 0)
        throw std::invalid_argument("single_irs_snr: non-positive parameter");
    if (d < 0.0 || d > span)
        throw std::invalid_argument("single_irs_snr: position outside [0, span]");
    const double n2 = double(n_elements) * double(n_elements);
    const double h2 = height * height;
    return power * beta0 * beta0 * n2 /
           ((d * d + h2) * ((span - d) * (span - d) + h2) * noise);
}

double double_irs_snr(double power, double beta0, int n_elements, double span,
                      double height, double noise) {
    if (!(power > 0.0) || !(beta0 > 0.0) || !(height > 0.0) || !(noise > 0.0) ||
        !(span > 0.0) || n_elements < 0)
        throw std::invalid_argument("double_irs_snr: non-positive parameter");
    const double n4 = std::pow(double(n_elements), 4.0);
    const double h4 = std::pow(height, 4.0);
    return power * beta0 * beta0 * beta0 * n4 / (16.0 * h4 * span * span * noise);
}

double cooperation_threshold(double height, double beta0) {
    if (!(height > 0.0) || !(beta0 > 0.0))
        throw std::invalid_argument("cooperation_threshold: non-positive parameter");
    return 4.0 * height / std::sqrt(beta0);
}

OrthogonalRates orthogonal_sum_rates(double power, double beta0,
                                     int n_elements,
                                     const std::vector<double>& user_span,
                                     double d, double noise) {
    if (!(power > 0.0) || !(beta0 > 0.0) || !(d > 0.0) || !(noise > 0.0))
        throw std::invalid_argument("orthogonal_sum_rates: non-positive parameter");
    const int k = int(user_span.size());
    if (k < 1) throw std::invalid_argument("orthogonal_sum_rates: no users");
    if (n_elements < k || n_elements % k != 0)
        throw std::invalid_argument("orthogonal_sum_rates: users must divide the element count");
    OrthogonalRates out;
    const double full = double(n_elements);
    const double part = full / double(k);
    for (double dk : user_span) {
        if (!(dk > 0.0)) throw std::invalid_argument("orthogonal_sum_rates: bad user distance");
        const double base = power * beta0 * beta0 / (d * d * dk * dk * noise);
        out.shared += rate_of(base * full * full) / double(k);
        out.dedicated += rate_of(base * part * part) / double(k);
    }
    return out;
}

std::string scheme_name(MacScheme s) {
    switch (s) {
        case MacScheme::tdma: return "tdma";
        case MacScheme::fdma: return "fdma";
        case MacScheme::noma: return "noma";
    }
    return "unknown";
}

RateRegion mac_region(double gamma1, double gamma2, MacScheme scheme,
                      int points) {
    if (gamma1 < 0.0 || gamma2 < 0.0)
        throw std::invalid_argument("mac_region: negative snr");
    if (points < 2) throw std::invalid_argument("mac_region: need at least 2 points");
    const double c1 = rate_of(gamma1);
    const double c2 = rate_of(gamma2);
    RateRegion region;
    region.boundary.reserve(size_t(points) + 1);
    switch (scheme) {
        case MacScheme::tdma:
            for (int i = 0; i < points; ++i) {
                const double tau = double(i) / double(points - 1);
                region.boundary.push_back({tau * c1, (1.0 - tau) * c2});
            }
            break;
        case MacScheme::fdma:
            for (int i = 0; i < points; ++i) {
                const double a = double(i) / double(points - 1);
                region.boundary.push_back({band_rate(a, gamma1), band_rate(1.0 - a, gamma2)});
            }
            break;
        case MacScheme::noma: {
            const double s = rate_of(gamma1 + gamma2);
            std::vector<double> grid;
            grid.reserve(size_t(points) + 1);
            for (int i = 0; i < points; ++i)
                grid.push_back(c1 * double(i) / double(points - 1));
            const double kink = s - c2;  // corner where the sum constraint takes over
            if (kink > 0.0 && kink < c1) grid.push_back(kink);
            std::sort(grid.begin(), grid.end());
            for (double r1 : grid)
                region.boundary.push_back({r1, std::min(c2, s - r1)});
            break;
        }
    }
    return region;
}

double region_max_r2(const RateRegion& region, double r1) {
    const auto& b = region.boundary;
    if (b.empty()) return -kInf;
    if (r1 < b.front().r1 - 1e-12) return b.front().r2;
    if (r1 > b.back().r1) return -kInf;
    for (size_t i = 1; i < b.size(); ++i) {
        if (r1 <= b[i].r1 + 1e-15) {
            const double x0 = b[i - 1].r1, x1 = b[i].r1;
            if (x1 - x0 <= 1e-15) return std::max(b[i - 1].r2, b[i].r2);
            const double t = std::clamp((r1 - x0) / (x1 - x0), 0.0, 1.0);
            return b[i - 1].r2 + t * (b[i].r2 - b[i - 1].r2);
        }
    }
    return b.back().r2;
}

bool region_contains(const RateRegion& region, const RatePoint& p, double tol) {
    if (p.r1 < -tol || p.r2 < -tol) return false;
    if (region.boundary.empty()) return false;
    const double max_r1 = region.boundary.back().r1;
    if (p.r1 > max_r1 + tol) return false;
    const double cap = region_max_r2(region, std::min(p.r1, max_r1));
    return p.r2 <= cap + tol;
}

// ---------------------------------------------------------------------------
// deterministic two-placement channels
// ---------------------------------------------------------------------------

namespace {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

double dist(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// amplitude sqrt(b0)/r, phase 2 pi r / lambda per hop
cd hop(double beta0, double r) {
    return std::polar(std::sqrt(beta0) / r, -kTwoPi * r / kWavelength);
}

void panel_shape(int n, int& rows, int& cols) {
    rows = int(std::sqrt(double(n)));
    while (rows > 1 && n % rows != 0) --rows;
    cols = n / rows;
}

}  // namespace

TwinChannels build_twin_channels(const MacGeometry& geom, int n_elements) {
    const int k = int(geom.user_span.size());
    if (k < 1 || geom.user_angle_deg.size() != size_t(k))
        throw std::invalid_argument("build_twin_channels: inconsistent user lists");
    if (n_elements < k || n_elements % k != 0)
        throw std::invalid_argument("build_twin_channels: users must divide the element count");
    if (!(geom.terminal_gap > 0.0))
        throw std::invalid_argument("build_twin_channels: non-positive terminal gap");
    const double beta0 = std::pow(10.0, geom.beta0_db / 10.0);

    std::vector<Vec3> users(static_cast<size_t>(k));
    for (int u = 0; u < k; ++u) {
        if (!(geom.user_span[size_t(u)] > 0.0))
            throw std::invalid_argument("build_twin_channels: non-positive user distance");
        const double a = geom.user_angle_deg[size_t(u)] * kPi / 180.0;
        users[size_t(u)] = {geom.user_span[size_t(u)] * std::cos(a),
                            geom.user_span[size_t(u)] * std::sin(a), 0.0};
    }

    // receiver at the origin; vertical panel centred terminal_gap away from it
    int rows = 0, cols = 0;
    panel_shape(n_elements, rows, cols);
    const double spacing = kWavelength / 2.0;
    const Vec3 center{0.0, -geom.terminal_gap, 0.0};
    std::vector<Vec3> elems(static_cast<size_t>(n_elements));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            elems[size_t(r) * cols + c] = {
                center.x + (double(c) - double(cols - 1) / 2.0) * spacing,
                center.y,
                center.z + (double(r) - double(rows - 1) / 2.0) * spacing};

    const Vec3 origin{0.0, 0.0, 0.0};
    TwinChannels tw;
    tw.shared.assign(size_t(k), Eigen::VectorXcd(n_elements));
    for (int u = 0; u < k; ++u)
        for (int n = 0; n < n_elements; ++n)
            tw.shared[size_t(u)][n] = hop(beta0, dist(users[size_t(u)], elems[size_t(n)])) *
                                      hop(beta0, dist(elems[size_t(n)], origin));

    // each user's own panel: elements mirrored through the user position, so
    // the two hop lengths swap and the composite coefficients coincide
    const int per = n_elements / k;
    tw.dedicated.assign(size_t(k), Eigen::VectorXcd(per));
    for (int u = 0; u < k; ++u)
        for (int m = 0; m < per; ++m) {
            const Vec3& e = elems[size_t(u * per + m)];
            const Vec3 f{users[size_t(u)].x - e.x, users[size_t(u)].y - e.y,
                         users[size_t(u)].z - e.z};
            tw.dedicated[size_t(u)][m] =
                hop(beta0, dist(users[size_t(u)], f)) * hop(beta0, dist(f, origin));
        }
    return tw;
}

// ---------------------------------------------------------------------------
// weighted boundary sweep for one shared phase profile
// ---------------------------------------------------------------------------

namespace {

struct InnerBest {
    double obj = 0.0;
    RatePoint point;
    double alpha = 0.5;  // fdma band share of user 1
};

InnerBest noma_inner(double g1, double g2, double mu) {
    const double c1 = rate_of(g1), c2 = rate_of(g2), s = rate_of(g1 + g2);
    const std::array<RatePoint, 4> verts = {
        RatePoint{c1, 0.0}, RatePoint{c1, s - c1}, RatePoint{s - c2, c2},
        RatePoint{0.0, c2}};
    InnerBest best;
    best.obj = -kInf;
    for (const auto& v : verts) {
        const double val = mu * v.r1 + (1.0 - mu) * v.r2;
        if (val > best.obj) {
            best.obj = val;
            best.point = v;
        }
    }
    return best;
}

InnerBest fdma_inner(double g1, double g2, double mu) {
    auto f = [&](double a) {
        return mu * band_rate(a, g1) + (1.0 - mu) * band_rate(1.0 - a, g2);
    };
    double a = golden_max(f, 0.0, 1.0);
    for (double cand : {0.0, 1.0})
        if (f(cand) > f(a)) a = cand;
    InnerBest best;
    best.alpha = a;
    best.point = {band_rate(a, g1), band_rate(1.0 - a, g2)};
    best.obj = f(a);
    return best;
}

InnerBest tdma_inner(double g1, double g2, double mu) {
    const double c1 = rate_of(g1), c2 = rate_of(g2);
    InnerBest best;
    if (mu * c1 >= (1.0 - mu) * c2) {
        best.obj = mu * c1;
        best.point = {c1, 0.0};
    } else {
        best.obj = (1.0 - mu) * c2;
        best.point = {0.0, c2};
    }
    return best;
}

InnerBest inner_best(double g1, double g2, double mu, MacScheme scheme) {
    switch (scheme) {
        case MacScheme::tdma: return tdma_inner(g1, g2, mu);
        case MacScheme::fdma: return fdma_inner(g1, g2, mu);
        case MacScheme::noma: return noma_inner(g1, g2, mu);
    }
    return {};
}

struct AscentResult {
    Eigen::VectorXd phase;
    double g1 = 0.0, g2 = 0.0;
    InnerBest inner;
};

// coordinate ascent over element phases; fdma holds its band split fixed per
// sweep and re-optimizes it between sweeps, so every step is monotone
AscentResult weighted_ascent(const std::vector<Eigen::VectorXcd>& users,
                             double power, double noise, double mu,
                             MacScheme scheme, const AoOptions& opts,
                             const Eigen::VectorXd& phase0) {
    const Eigen::Index n = users[0].size();
    AscentResult res;
    res.phase = phase0;

    auto snrs = [&](const Eigen::VectorXd& phase, cd& a1, cd& a2) {
        a1 = cd{0.0, 0.0};
        a2 = cd{0.0, 0.0};
        for (Eigen::Index i = 0; i < n; ++i) {
            const cd psi = std::polar(1.0, phase[i]);
            a1 += psi * users[0][i];
            a2 += psi * users[1][i];
        }
    };

    cd a1, a2;
    snrs(res.phase, a1, a2);
    const double scale = power / noise;
    auto g_of = [&](cd a) { return scale * std::norm(a); };

    InnerBest cur = inner_best(g_of(a1), g_of(a2), mu, scheme);
    double obj = cur.obj;
    double alpha = cur.alpha;

    const double step = kTwoPi / double(opts.phase_grid);
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (Eigen::Index e = 0; e < n; ++e) {
            const cd psi_old = std::polar(1.0, res.phase[e]);
            const cd b1 = users[0][e], b2 = users[1][e];
            const cd r1 = a1 - psi_old * b1;
            const cd r2 = a2 - psi_old * b2;
            // |r + e^{j t} b|^2 = m + q cos(t + phi)
            const double m1 = std::norm(r1) + std::norm(b1);
            const double q1 = 2.0 * std::abs(r1) * std::abs(b1);
            const double p1 = std::arg(b1) - std::arg(r1);
            const double m2 = std::norm(r2) + std::norm(b2);
            const double q2 = 2.0 * std::abs(r2) * std::abs(b2);
            const double p2 = std::arg(b2) - std::arg(r2);
            auto val = [&](double t) {
                const double g1 = scale * (m1 + q1 * std::cos(t + p1));
                const double g2 = scale * (m2 + q2 * std::cos(t + p2));
                switch (scheme) {
                    case MacScheme::tdma:
                        return std::max(mu * rate_of(g1), (1.0 - mu) * rate_of(g2));
                    case MacScheme::fdma:
                        return mu * band_rate(alpha, g1) +
                               (1.0 - mu) * band_rate(1.0 - alpha, g2);
                    case MacScheme::noma:
                        return noma_inner(g1, g2, mu).obj;
                }
                return 0.0;
            };
            double best_t = res.phase[e];
            double best_v = val(best_t);
            int best_k = -1;
            for (int k2 = 0; k2 < opts.phase_grid; ++k2) {
                const double t = double(k2) * step;
                const double v = val(t);
                if (v > best_v) {
                    best_v = v;
                    best_t = t;
                    best_k = k2;
                }
            }
            if (best_k >= 0) {
                const double center = double(best_k) * step;
                const double polished = golden_max(val, center - step, center + step);
                if (val(polished) > best_v) best_t = polished;
            }
            res.phase[e] = wrap_angle(best_t);
            const cd psi_new = std::polar(1.0, res.phase[e]);
            a1 = r1 + psi_new * b1;
            a2 = r2 + psi_new * b2;
        }
        snrs(res.phase, a1, a2);  // refresh accumulated sums
        cur = inner_best(g_of(a1), g_of(a2), mu, scheme);
        alpha = cur.alpha;
        if (cur.obj - obj <= opts.tol * std::max(std::abs(obj), 1e-300)) {
            obj = std::max(obj, cur.obj);
            break;
        }
        obj = cur.obj;
    }

    res.g1 = g_of(a1);
    res.g2 = g_of(a2);
    res.inner = inner_best(res.g1, res.g2, mu, scheme);
    return res;
}

Eigen::VectorXd aligned_profile(const Eigen::VectorXcd& c) {
    Eigen::VectorXd phase(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) phase[i] = wrap_angle(-std::arg(c[i]));
    return phase;
}

// First block aligned to user p, second to user q, with the second block's
// common phase chosen so both cross sums land non-destructively (two
// half-circle feasibility arcs always intersect).
Eigen::VectorXd split_profile(const std::vector<Eigen::VectorXcd>& users,
                              int p, int q) {
    const Eigen::Index n = users[0].size();
    const Eigen::Index half = n / 2;
    Eigen::VectorXd phase(n);
    cd cross_p{0.0, 0.0};  // second block leaking into user p
    cd cross_q{0.0, 0.0};  // first block leaking into user q
    for (Eigen::Index i = 0; i < half; ++i) {
        phase[i] = wrap_angle(-std::arg(users[size_t(p)][i]));
        cross_q += std::polar(1.0, phase[i]) * users[size_t(q)][i];
    }
    for (Eigen::Index i = half; i < n; ++i) {
        phase[i] = wrap_angle(-std::arg(users[size_t(q)][i]));
        cross_p += std::polar(1.0, phase[i]) * users[size_t(p)][i];
    }
    double delta;
    const bool zp = std::abs(cross_p) == 0.0, zq = std::abs(cross_q) == 0.0;
    if (zp && zq) {
        delta = 0.0;
    } else if (zp) {
        delta = std::arg(cross_q);
    } else if (zq) {
        delta = -std::arg(cross_p);
    } else {
        const double u = -std::arg(cross_p);
        const double v = std::arg(cross_q);
        delta = u + wrap_pm(v - u) / 2.0;
    }
    for (Eigen::Index i = half; i < n; ++i)
        phase[i] = wrap_angle(phase[i] + delta);
    return phase;
}

std::vector<Eigen::VectorXd> make_starts(const std::vector<Eigen::VectorXcd>& users,
                                         int ao_starts) {
    if (ao_starts < 1) throw std::invalid_argument("weighted sweep: need at least one start");
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(aligned_profile(users[0]));
    starts.push_back(aligned_profile(users[1]));
    starts.push_back(split_profile(users, 0, 1));
    starts.push_back(split_profile(users, 1, 0));
    const Eigen::Index n = users[0].size();
    for (int s = 4; s < ao_starts; ++s) {
        Rng rng(mix64(0xD0E9F00DULL + std::uint64_t(s)));
        Eigen::VectorXd phase(n);
        for (Eigen::Index i = 0; i < n; ++i) phase[i] = rng.uniform_angle();
        starts.push_back(phase);
    }
    if (int(starts.size()) > std::max(ao_starts, 4))
        starts.resize(size_t(std::max(ao_starts, 4)));
    return starts;
}

AscentResult best_ascent(const std::vector<Eigen::VectorXcd>& users,
                         double power, double noise, double mu,
                         MacScheme scheme, const AoOptions& opts,
                         const std::vector<Eigen::VectorXd>& starts) {
    AscentResult best;
    best.inner.obj = -kInf;
    for (const auto& s : starts) {
        AscentResult r = weighted_ascent(users, power, noise, mu, scheme, opts, s);
        if (r.inner.obj > best.inner.obj) best = r;
    }
    return best;
}

RateRegion pareto_region(std::vector<RatePoint> pts, bool concave_hull) {
    for (auto& p : pts) {
        p.r1 = std::max(p.r1, 0.0);
        p.r2 = std::max(p.r2, 0.0);
    }
    std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r1 != b.r1 ? a.r1 < b.r1 : a.r2 > b.r2;
    });
    // keep the non-dominated staircase (scan right to left)
    std::vector<RatePoint> kept;
    double best_r2 = -kInf;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        if (it->r2 > best_r2 + 1e-15) {
            kept.push_back(*it);
            best_r2 = it->r2;
        }
    }
    std::reverse(kept.begin(), kept.end());
    if (concave_hull && kept.size() > 2) {
        std::vector<RatePoint> hull;
        for (const auto& p : kept) {
            while (hull.size() >= 2) {
                const RatePoint& a = hull[hull.size() - 2];
                const RatePoint& b = hull.back();
                const double cross = (b.r1 - a.r1) * (p.r2 - a.r2) -
                                     (b.r2 - a.r2) * (p.r1 - a.r1);
                if (cross >= -1e-12) hull.pop_back();  // b on or under chord a-p
                else break;
            }
            hull.push_back(p);
        }
        kept.swap(hull);
    }
    if (!kept.empty() && kept.front().r1 > 1e-12)
        kept.insert(kept.begin(), RatePoint{0.0, kept.front().r2});
    RateRegion region;
    region.boundary = std::move(kept);
    return region;
}

}  // namespace

WeightedPoint shared_weighted_best(const std::vector<Eigen::VectorXcd>& users,
                                   double power, double noise, double mu,
                                   MacScheme scheme, const AoOptions& opts,
                                   int ao_starts) {
    if (users.size() != 2) throw std::invalid_argument("shared_weighted_best: need two users");
    if (users[0].size() != users[1].size() || users[0].size() < 1)
        throw std::invalid_argument("shared_weighted_best: channel length mismatch");
    if (!(power > 0.0) || !(noise > 0.0))
        throw std::invalid_argument("shared_weighted_best: power and noise must be positive");
    if (mu < 0.0 || mu > 1.0)
        throw std::invalid_argument("shared_weighted_best: weight outside [0,1]");
    const AscentResult r = best_ascent(users, power, noise, mu, scheme, opts,
                                       make_starts(users, ao_starts));
    WeightedPoint out;
    out.point = r.inner.point;
    out.objective = r.inner.obj;
    return out;
}

std::vector<RegionPair> deployment_region_compare(const MacGeometry& geom,
                                                  int n_elements, double power,
                                                  double noise,
                                                  const AoOptions& opts,
                                                  int boundary_points,
                                                  int ao_starts) {
    if (geom.user_span.size() != 2 || geom.user_angle_deg.size() != 2)
        throw std::invalid_argument("deployment_region_compare: exactly two users required");
    if (n_elements < 2 || n_elements % 2 != 0)
        throw std::invalid_argument("deployment_region_compare: element count must split evenly");
    if (!(power > 0.0) || !(noise > 0.0))
        throw std::invalid_argument("deployment_region_compare: power and noise must be positive");
    if (boundary_points < 2)
        throw std::invalid_argument("deployment_region_compare: need at least 2 boundary points");

    const TwinChannels tw = build_twin_channels(geom, n_elements);
    const double scale = power / noise;

    // per-user aligned SNR of each placement (far surfaces contribute nothing
    // to the dedicated placement)
    auto aligned_snr = [&](const Eigen::VectorXcd& c) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < c.size(); ++i) s += std::abs(c[i]);
        return scale * s * s;
    };
    const double ded_g1 = aligned_snr(tw.dedicated[0]);
    const double ded_g2 = aligned_snr(tw.dedicated[1]);
    const double cen_g1 = aligned_snr(tw.shared[0]);
    const double cen_g2 = aligned_snr(tw.shared[1]);

    std::vector<RegionPair> out;
    for (MacScheme scheme : {MacScheme::tdma, MacScheme::fdma, MacScheme::noma}) {
        RegionPair pair;
        pair.scheme = scheme;
        pair.dedicated = mac_region(ded_g1, ded_g2, scheme, boundary_points);

        if (scheme == MacScheme::tdma) {
            // the shared surface re-points in each slot, so both users see
            // their full-panel aligned SNR
            pair.shared = mac_region(cen_g1, cen_g2, scheme, boundary_points);
            out.push_back(std::move(pair));
            continue;
        }

        std::vector<RatePoint> cloud;
        auto add_profile_curve = [&](const Eigen::VectorXd& phase) {
            cd a1{0.0, 0.0}, a2{0.0, 0.0};
            for (Eigen::Index i = 0; i < n_elements; ++i) {
                const cd psi = std::polar(1.0, phase[i]);
                a1 += psi * tw.shared[0][i];
                a2 += psi * tw.shared[1][i];
            }
            const double g1 = scale * std::norm(a1);
            const double g2 = scale * std::norm(a2);
            const RateRegion r = mac_region(g1, g2, scheme, boundary_points);
            cloud.insert(cloud.end(), r.boundary.begin(), r.boundary.end());
        };
        // explicitly dominating profiles: both split orders and both
        // single-user alignments
        add_profile_curve(split_profile(tw.shared, 0, 1));
        add_profile_curve(split_profile(tw.shared, 1, 0));
        add_profile_curve(aligned_profile(tw.shared[0]));
        add_profile_curve(aligned_profile(tw.shared[1]));

        const std::vector<Eigen::VectorXd> base_starts = make_starts(tw.shared, ao_starts);
        Eigen::VectorXd warm;
        for (int j = 0; j < boundary_points; ++j) {
            const double mu = double(j) / double(boundary_points - 1);
            std::vector<Eigen::VectorXd> starts = base_starts;
            if (warm.size() > 0) starts.push_back(warm);
            const AscentResult r =
                best_ascent(tw.shared, power, noise, mu, scheme, opts, starts);
            warm = r.phase;
            if (scheme == MacScheme::noma) {
                const RateRegion pent = mac_region(r.g1, r.g2, scheme, 2);
                cloud.insert(cloud.end(), pent.boundary.begin(), pent.boundary.end());
            } else {
                cloud.push_back(r.inner.point);
            }
        }
        pair.shared = pareto_region(std::move(cloud), scheme == MacScheme::noma);
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace irssim

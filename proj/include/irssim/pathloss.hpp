#pragma once

namespace irssim {

// Distance-power law anchored at 1 m: gain(d) = 10^(ref_gain_db/10) * d^-exponent.
struct PathLossSpec {
    double ref_gain_db = -30.0;  // gain at the 1 m reference, dB
    double exponent = 2.0;       // >= 0
};

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

// Average channel power at distance d. Throws std::domain_error for d <= 0
// or a negative exponent.
double path_loss(const PathLossSpec& spec, double distance);

// End-to-end average power of one reflected element path: the two hop
// losses multiply (product-distance law).
double product_path_gain(const PathLossSpec& hop1, double d1,
                         const PathLossSpec& hop2, double d2);

// Specular-plate comparison model, gain = ref * (d1+d2)^-2. An infinitely
// large reflector behaves like a mirror image source at distance d1+d2;
// a finite element array does not, so this is never used to build link
// budgets here. Kept for side-by-side comparison in docs and tests.
double sum_distance_gain(double ref_gain_db, double d1, double d2);

}  // namespace irssim

#include "irssim/pathloss.hpp"

#include <cmath>
#include <stdexcept>

namespace irssim {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

double path_loss(const PathLossSpec& spec, double distance) {
    if (!(distance > 0.0))
        throw std::domain_error("path_loss: distance must be positive");
    if (spec.exponent < 0.0)
        throw std::domain_error("path_loss: exponent must be non-negative");
    return db_to_linear(spec.ref_gain_db) * std::pow(distance, -spec.exponent);
}

double product_path_gain(const PathLossSpec& hop1, double d1,
                         const PathLossSpec& hop2, double d2) {
    return path_loss(hop1, d1) * path_loss(hop2, d2);
}

double sum_distance_gain(double ref_gain_db, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::domain_error("sum_distance_gain: distances must be positive");
    const double d = d1 + d2;
    return db_to_linear(ref_gain_db) / (d * d);
}

}  // namespace irssim

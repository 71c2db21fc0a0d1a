#pragma once

#include "rwave/riemann.hpp"

namespace rwave {

/// Wedge partition of the (x,t) half-plane by the wave-speed midlines, and
/// the settling time t0 after which each wave dominates its own wedge.
struct ZonePartition {
    Vec speeds;
    Vec shifts;
    double t0 = 0.0;

    int n() const { return static_cast<int>(speeds.size()); }

    /// 1-based index i with (x,t) in Omega_i.
    int omega_index(double x, double t) const {
        for (int i = 0; i + 1 < speeds.size(); ++i) {
            if (x <= 0.5 * (speeds[i] + speeds[i + 1]) * t) return i + 1;
        }
        return static_cast<int>(speeds.size());
    }

    /// True when (x,t) lies outside Omega_i (in Omega_i^- or Omega_i^+).
    bool in_omega_complement(int field, double x, double t) const {
        return omega_index(x, t) != field;
    }
};

inline ZonePartition zone_partition(const WaveFan& fan, const Vec& shifts) {
    if (shifts.size() != fan.n())
        throw UsageError("zone_partition: one shift per wave required");
    ZonePartition z;
    z.speeds = fan.speeds;
    z.shifts = shifts;
    double denom = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < fan.n(); ++i)
        denom = std::min(denom, fan.speeds[i + 1] - fan.speeds[i]);
    for (int i = 0; i < fan.n(); ++i)
        if (fan.speeds[i] > 0.0) denom = std::min(denom, fan.speeds[i]);
    if (!(denom > 0.0)) throw UsageError("zone_partition: speeds not strictly ascending");
    const double num = 4.0 * shifts.cwiseAbs().maxCoeff();
    z.t0 = std::isfinite(denom) ? num / denom : 0.0;
    return z;
}

} // namespace rwave

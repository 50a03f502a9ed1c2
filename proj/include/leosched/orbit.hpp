#ifndef LEOSCHED_ORBIT_HPP
#define LEOSCHED_ORBIT_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace leosched::orbit {

// Single-plane constellation seen from a ground user fixed at earth-center
// angle 0. Angles are degrees, distances kilometers.
struct ConstellationConfig {
    int satellite_count = 12;
    double earth_radius_km = 6371.0;
    double orbit_altitude_km = 780.0;
    double angular_spacing_deg = 4.0;
    double angular_velocity_deg_s = 2e-4; // clockwise: gamma decreases over time
    double visibility_bound_deg = 10.0;   // half-angle of the service cone
    double initial_gamma_offset_deg = 0.0;
};

struct SatelliteState {
    int index = 0;
    double gamma_deg = 0.0; // signed earth-center angle to the GU line, in (-180, 180]
    double slant_range_km = 0.0;
    double backlog_release_s = 0.0; // absolute time the satellite's FCFS queue drains
};

// Normalize to (-180, 180], exact wrap at the boundary.
inline double normalize_angle_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0) r += 360.0;
    else if (r > 180.0) r -= 360.0;
    return r;
}

inline double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }

// GU-to-satellite distance by the cosine rule over the earth-center angle.
inline double slant_range(double gamma_deg, double earth_radius_km, double altitude_km) {
    if (earth_radius_km <= 0.0 || altitude_km <= 0.0)
        throw std::invalid_argument("orbit: earth radius and altitude must be positive");
    const double r = earth_radius_km;
    const double ro = earth_radius_km + altitude_km;
    const double c = std::cos(deg_to_rad(gamma_deg));
    return std::sqrt(r * r + ro * ro - 2.0 * r * ro * c);
}

// Service is possible strictly inside the cone: |gamma| < bound.
inline bool is_visible(double gamma_deg, const ConstellationConfig& cfg) {
    return std::fabs(gamma_deg) < cfg.visibility_bound_deg;
}

inline bool is_visible(const SatelliteState& s, const ConstellationConfig& cfg) {
    return is_visible(s.gamma_deg, cfg);
}

// Satellites evenly spaced and centered over the GU (plus a configurable
// offset), indices increasing with gamma.
inline std::vector<SatelliteState> initial_states(const ConstellationConfig& cfg) {
    std::vector<SatelliteState> states;
    states.reserve(static_cast<std::size_t>(cfg.satellite_count));
    const double mid = 0.5 * static_cast<double>(cfg.satellite_count - 1);
    for (int j = 0; j < cfg.satellite_count; ++j) {
        SatelliteState s;
        s.index = j;
        s.gamma_deg = normalize_angle_deg(
            cfg.initial_gamma_offset_deg + (static_cast<double>(j) - mid) * cfg.angular_spacing_deg);
        s.slant_range_km = slant_range(s.gamma_deg, cfg.earth_radius_km, cfg.orbit_altitude_km);
        states.push_back(s);
    }
    return states;
}

// Uniform clockwise motion: every gamma decreases by V*dt, then wraps.
// Backlog release times are untouched.
inline std::vector<SatelliteState> advance(const ConstellationConfig& cfg,
                                           const std::vector<SatelliteState>& states,
                                           double dt_s) {
    if (dt_s < 0.0) throw std::invalid_argument("orbit: advance dt must be nonnegative");
    std::vector<SatelliteState> out = states;
    const double delta = cfg.angular_velocity_deg_s * dt_s;
    for (auto& s : out) {
        s.gamma_deg = normalize_angle_deg(s.gamma_deg - delta);
        s.slant_range_km = slant_range(s.gamma_deg, cfg.earth_radius_km, cfg.orbit_altitude_km);
    }
    return out;
}

// Angle of one satellite dt seconds into a period, for metrics that are
// evaluated mid-period (e.g. the uplink rate at transmission start).
inline double gamma_after(double gamma_deg, const ConstellationConfig& cfg, double dt_s) {
    return normalize_angle_deg(gamma_deg - cfg.angular_velocity_deg_s * dt_s);
}

} // namespace leosched::orbit

#endif

#include "leo/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace leo::orbit {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap_lon_deg(double lon) {
    lon = std::fmod(lon, 360.0);
    if (lon > 180.0) lon -= 360.0;
    if (lon <= -180.0) lon += 360.0;
    return lon;
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Argument of latitude of a satellite, radians.
double phase_rad(const ConstellationConfig& cfg, SatelliteId sat, Seconds t) {
    const double mean_motion = 2.0 * std::numbers::pi / orbital_period_s(cfg);
    return 2.0 * std::numbers::pi * sat.slot / cfg.sats_per_plane + mean_motion * (t - cfg.epoch_s);
}

void require(bool ok, const char* field, const char* rule) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + rule);
}

}  // namespace

void ConstellationConfig::validate() const {
    require(num_planes >= 1, "num_planes", "must be at least 1");
    require(sats_per_plane >= 1, "sats_per_plane", "must be at least 1");
    require(std::isfinite(altitude_km) && altitude_km > 0.0, "altitude_km", "must be positive");
    require(polar_cutoff_lat_deg >= 0.0 && polar_cutoff_lat_deg <= 90.0, "polar_cutoff_lat_deg",
            "must lie in [0, 90]");
    require(min_elevation_deg >= -90.0 && min_elevation_deg <= 90.0, "min_elevation_deg", "must lie in [-90, 90]");
    require(std::isfinite(epoch_s), "epoch_s", "must be finite");
}

int node_id(const ConstellationConfig& cfg, SatelliteId sat) {
    if (sat.plane < 0 || sat.plane >= cfg.num_planes || sat.slot < 0 || sat.slot >= cfg.sats_per_plane) {
        throw std::out_of_range("satellite id outside the constellation");
    }
    return sat.plane * cfg.sats_per_plane + sat.slot;
}

SatelliteId satellite_at(const ConstellationConfig& cfg, int node) {
    if (node < 0 || node >= cfg.num_satellites()) throw std::out_of_range("node is not a satellite");
    return {node / cfg.sats_per_plane, node % cfg.sats_per_plane};
}

Vec3 to_cartesian(const GeoPosition& p) {
    const double lat = p.lat_deg * kDeg;
    const double lon = p.lon_deg * kDeg;
    return {p.radius_km * std::cos(lat) * std::cos(lon), p.radius_km * std::cos(lat) * std::sin(lon),
            p.radius_km * std::sin(lat)};
}

GeoPosition to_geo(const Vec3& v) {
    const double r = norm(v);
    if (r == 0.0) return {0.0, 0.0, 0.0};
    const double lat = std::asin(std::clamp(v.z / r, -1.0, 1.0)) / kDeg;
    return {lat, wrap_lon_deg(std::atan2(v.y, v.x) / kDeg), r};
}

Seconds orbital_period_s(const ConstellationConfig& cfg) {
    const double a = cfg.semi_major_axis_km();
    return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kEarthMuKm3PerS2);
}

GeoPosition satellite_position(const ConstellationConfig& cfg, SatelliteId sat, Seconds t) {
    const double a = cfg.semi_major_axis_km();
    const double u = phase_rad(cfg, sat, t);
    const double raan = sat.plane * std::numbers::pi / cfg.num_planes;
    // inclination 90 deg
    Vec3 r{a * std::cos(raan) * std::cos(u), a * std::sin(raan) * std::cos(u), a * std::sin(u)};
    if (cfg.earth_rotation) {
        const double theta = kEarthRotationRadPerS * (t - cfg.epoch_s);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        r = {c * r.x + s * r.y, -s * r.x + c * r.y, r.z};
    }
    auto geo = to_geo(r);
    geo.radius_km = a;
    return geo;
}

double satellite_latitude_deg(const ConstellationConfig& cfg, SatelliteId sat, Seconds t) {
    return std::asin(std::clamp(std::sin(phase_rad(cfg, sat, t)), -1.0, 1.0)) / kDeg;
}

std::vector<SatelliteId> isl_neighbors(const ConstellationConfig& cfg, SatelliteId sat, Seconds t) {
    (void)node_id(cfg, sat);
    std::vector<SatelliteId> out;
    const int s = cfg.sats_per_plane;
    for (int step : {-1, 1}) {
        SatelliteId n{sat.plane, ((sat.slot + step) % s + s) % s};
        if (n != sat) out.push_back(n);
    }
    const double lat = std::abs(satellite_latitude_deg(cfg, sat, t));
    if (lat <= cfg.polar_cutoff_lat_deg) {
        // no wrap-around: planes 0 and P-1 form the seam
        for (int step : {-1, 1}) {
            const int plane = sat.plane + step;
            if (plane < 0 || plane >= cfg.num_planes) continue;
            SatelliteId n{plane, sat.slot};
            if (std::abs(satellite_latitude_deg(cfg, n, t)) <= cfg.polar_cutoff_lat_deg) out.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double distance_km(const GeoPosition& a, const GeoPosition& b) { return norm(sub(to_cartesian(a), to_cartesian(b))); }

double elevation_deg(const GeoPosition& observer, const GeoPosition& target) {
    const Vec3 g = to_cartesian(observer);
    const Vec3 d = sub(to_cartesian(target), g);
    const double dn = norm(d);
    const double gn = norm(g);
    if (dn == 0.0 || gn == 0.0) return 90.0;
    return std::asin(std::clamp(dot(d, g) / (dn * gn), -1.0, 1.0)) / kDeg;
}

bool sgl_visible(const ConstellationConfig& cfg, SatelliteId sat, const GroundNode& ground, Seconds t) {
    return elevation_deg(ground.position(), satellite_position(cfg, sat, t)) >= cfg.min_elevation_deg;
}

bool line_of_sight(const GeoPosition& a, const GeoPosition& b) {
    const Vec3 pa = to_cartesian(a);
    const Vec3 d = sub(to_cartesian(b), pa);
    const double len2 = dot(d, d);
    if (len2 == 0.0) return true;
    // closest approach of the segment to the Earth's centre
    const double s = std::clamp(-dot(pa, d) / len2, 0.0, 1.0);
    const Vec3 c{pa.x + s * d.x, pa.y + s * d.y, pa.z + s * d.z};
    return norm(c) >= kEarthRadiusKm;
}

double central_angle_rad(const GeoPosition& a, const GeoPosition& b) {
    const Vec3 pa = to_cartesian({a.lat_deg, a.lon_deg, 1.0});
    const Vec3 pb = to_cartesian({b.lat_deg, b.lon_deg, 1.0});
    return std::acos(std::clamp(dot(pa, pb), -1.0, 1.0));
}

}  // namespace leo::orbit

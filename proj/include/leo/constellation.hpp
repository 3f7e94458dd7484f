#pragma once

/**
 * @file constellation.hpp
 * @brief Walker Star geometry on a spherical Earth.
 *
 * Planes are circular polar orbits whose ascending nodes are spread evenly
 * over 180 degrees of right ascension, so the first and last planes move in
 * opposite directions where they meet (the seam). Satellites are evenly
 * phased within a plane with no inter-plane phase offset.
 *
 * Positions are geocentric latitude/longitude/radius. With earth rotation
 * off (the default) the Earth-fixed and inertial frames coincide.
 */

#include <compare>
#include <vector>

namespace leo::orbit {

using Seconds = double;

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kEarthMuKm3PerS2 = 398600.4418;
inline constexpr double kEarthRotationRadPerS = 7.2921159e-5;
inline constexpr double kSpeedOfLightKmPerS = 299792.458;

struct ConstellationConfig {
    int num_planes = 8;
    int sats_per_plane = 16;
    double altitude_km = 500.0;
    double polar_cutoff_lat_deg = 66.6;
    double min_elevation_deg = 10.0;
    Seconds epoch_s = 0.0;
    bool earth_rotation = false;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    [[nodiscard]] int num_satellites() const noexcept { return num_planes * sats_per_plane; }
    [[nodiscard]] double semi_major_axis_km() const noexcept { return kEarthRadiusKm + altitude_km; }

    friend bool operator==(const ConstellationConfig&, const ConstellationConfig&) = default;
};

struct SatelliteId {
    int plane = 0;
    int slot = 0;

    friend auto operator<=>(const SatelliteId&, const SatelliteId&) = default;
};

[[nodiscard]] int node_id(const ConstellationConfig& cfg, SatelliteId sat);
[[nodiscard]] SatelliteId satellite_at(const ConstellationConfig& cfg, int node);

struct GeoPosition {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double radius_km = kEarthRadiusKm;
};

struct GroundNode {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    [[nodiscard]] GeoPosition position() const noexcept { return {lat_deg, lon_deg, kEarthRadiusKm}; }

    friend bool operator==(const GroundNode&, const GroundNode&) = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

[[nodiscard]] Vec3 to_cartesian(const GeoPosition& p);
[[nodiscard]] GeoPosition to_geo(const Vec3& v);

/// Kepler's third law for the configured shell.
[[nodiscard]] Seconds orbital_period_s(const ConstellationConfig& cfg);

[[nodiscard]] GeoPosition satellite_position(const ConstellationConfig& cfg, SatelliteId sat, Seconds t);

/// Latitude only; cheaper than the full position for link gating.
[[nodiscard]] double satellite_latitude_deg(const ConstellationConfig& cfg, SatelliteId sat, Seconds t);

/// Two intra-plane neighbours always; the two same-slot neighbours in the
/// adjacent planes unless the pair straddles the seam or either end is above
/// the polar cutoff. Sorted by (plane, slot).
[[nodiscard]] std::vector<SatelliteId> isl_neighbors(const ConstellationConfig& cfg, SatelliteId sat, Seconds t);

/// Straight-line (chord) distance between two geocentric positions.
[[nodiscard]] double distance_km(const GeoPosition& a, const GeoPosition& b);

/// Elevation of `target` above the local horizon of `observer`, in degrees.
[[nodiscard]] double elevation_deg(const GeoPosition& observer, const GeoPosition& target);

[[nodiscard]] bool sgl_visible(const ConstellationConfig& cfg, SatelliteId sat, const GroundNode& ground, Seconds t);

/// True when the segment between a and b clears the Earth's surface.
[[nodiscard]] bool line_of_sight(const GeoPosition& a, const GeoPosition& b);

/// Great-circle central angle between the sub-points of two positions, radians.
[[nodiscard]] double central_angle_rad(const GeoPosition& a, const GeoPosition& b);

}  // namespace leo::orbit

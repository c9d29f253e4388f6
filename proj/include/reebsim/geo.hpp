#pragma once

#include <cmath>
#include <string>

#include "reebsim/error.hpp"

namespace reebsim {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const LatLon& a, const LatLon& b) {
        return a.lat == b.lat && a.lon == b.lon;
    }
};

enum class DistanceMetric {
    EuclideanDegrees, // plain Euclidean distance on (lat, lon) pairs
    HaversineMeters,  // great-circle distance, spherical earth
};

constexpr double kEarthRadiusMeters = 6371000.0;

// Meters per degree of latitude is at least this everywhere on the spheroid;
// used only for conservative spatial-index cell sizing.
constexpr double kMinMetersPerDegLat = 110567.0;
constexpr double kMetersPerDegArc = kEarthRadiusMeters * 3.14159265358979323846 / 180.0;

inline double euclidean_degrees(const LatLon& a, const LatLon& b) {
    const double dlat = a.lat - b.lat;
    const double dlon = a.lon - b.lon;
    return std::sqrt(dlat * dlat + dlon * dlon);
}

inline double haversine_meters(const LatLon& a, const LatLon& b) {
    const double deg = 3.14159265358979323846 / 180.0;
    const double phi1 = a.lat * deg;
    const double phi2 = b.lat * deg;
    const double dphi = (b.lat - a.lat) * deg;
    const double dlam = (b.lon - a.lon) * deg;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

inline double distance(const LatLon& a, const LatLon& b, DistanceMetric metric) {
    switch (metric) {
    case DistanceMetric::EuclideanDegrees: return euclidean_degrees(a, b);
    case DistanceMetric::HaversineMeters: return haversine_meters(a, b);
    }
    raise(ErrorCode::Config, "unknown distance metric");
}

const char* metric_name(DistanceMetric metric);
DistanceMetric metric_from_name(const std::string& name);

} // namespace reebsim

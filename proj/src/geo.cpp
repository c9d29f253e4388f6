#include "reebsim/geo.hpp"

namespace reebsim {

const char* metric_name(DistanceMetric metric) {
    switch (metric) {
    case DistanceMetric::EuclideanDegrees: return "euclidean-degrees";
    case DistanceMetric::HaversineMeters: return "haversine-meters";
    }
    return "unknown";
}

DistanceMetric metric_from_name(const std::string& name) {
    if (name == "euclidean-degrees") return DistanceMetric::EuclideanDegrees;
    if (name == "haversine-meters") return DistanceMetric::HaversineMeters;
    raise(ErrorCode::Config, "unknown distance metric: " + name);
}

} // namespace reebsim

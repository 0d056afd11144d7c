#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tempus/errors.hpp"
#include "tempus/time_scale.hpp"

namespace tempus {

/// Symbolic description of a time-scale construction, kept alongside the
/// built grid so configs can be echoed and parameter sweeps can rebuild the
/// grid with one knob changed.
struct TimeScaleFamily {
    enum class Kind { Uniform, QScale, Points, Mixed, Sample };

    Kind kind = Kind::Uniform;
    double a = 0.0; // Uniform / Sample
    double b = 1.0;
    double h = 1.0;  // Uniform
    double t0 = 1.0; // QScale
    double q = 2.0;
    std::size_t n = 2;                    // QScale / Sample
    std::vector<double> points;           // Points
    std::vector<TimeScaleFamily> segments; // Mixed

    static TimeScaleFamily uniform(double a, double b, double h) {
        TimeScaleFamily f;
        f.kind = Kind::Uniform;
        f.a = a;
        f.b = b;
        f.h = h;
        return f;
    }

    static TimeScaleFamily q_scale(double t0, double q, std::size_t n) {
        TimeScaleFamily f;
        f.kind = Kind::QScale;
        f.t0 = t0;
        f.q = q;
        f.n = n;
        return f;
    }

    static TimeScaleFamily from_points(std::vector<double> pts) {
        TimeScaleFamily f;
        f.kind = Kind::Points;
        f.points = std::move(pts);
        return f;
    }

    static TimeScaleFamily sample(double a, double b, std::size_t n) {
        TimeScaleFamily f;
        f.kind = Kind::Sample;
        f.a = a;
        f.b = b;
        f.n = n;
        return f;
    }

    static TimeScaleFamily mixed(std::vector<TimeScaleFamily> segs) {
        TimeScaleFamily f;
        f.kind = Kind::Mixed;
        f.segments = std::move(segs);
        return f;
    }
};

inline TimeScale make_timescale(const TimeScaleFamily& family) {
    switch (family.kind) {
        case TimeScaleFamily::Kind::Uniform:
            return TimeScale::uniform(family.a, family.b, family.h);
        case TimeScaleFamily::Kind::QScale:
            return TimeScale::q_scale(family.t0, family.q, family.n);
        case TimeScaleFamily::Kind::Points:
            return TimeScale::from_points(family.points);
        case TimeScaleFamily::Kind::Sample:
            return TimeScale::sampled(family.a, family.b, family.n);
        case TimeScaleFamily::Kind::Mixed: {
            std::vector<std::vector<double>> segs;
            segs.reserve(family.segments.size());
            for (const auto& s : family.segments) segs.push_back(make_timescale(s).points());
            return TimeScale::mixed(segs);
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown time-scale family");
}

} // namespace tempus

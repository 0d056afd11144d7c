#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "tempus/errors.hpp"

namespace tempus {

/// A finite time scale: a strictly increasing set of real points t_0 < ... <
/// t_{n-1}. Every point except the right endpoint is isolated (positive
/// graininess); continuous intervals are handled by sampling them densely.
/// Immutable after construction and safe to share across threads.
class TimeScale {
public:
    /// Validates and adopts the given points: strictly increasing, all
    /// finite, at least two. Nothing is deduplicated or sorted.
    static TimeScale from_points(std::vector<double> points) {
        if (points.size() < 2) {
            throw Error(ErrorKind::TooFewPoints,
                        "time scale needs >= 2 points, got " + std::to_string(points.size()));
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i])) {
                throw Error(ErrorKind::NonFiniteValue,
                            "time-scale point " + std::to_string(i) + " is not finite");
            }
        }
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            if (!(points[i] < points[i + 1])) {
                throw Error(ErrorKind::NonMonotonePoints,
                            "points[" + std::to_string(i) + "]=" + std::to_string(points[i]) +
                                " !< points[" + std::to_string(i + 1) + "]=" +
                                std::to_string(points[i + 1]));
            }
        }
        return TimeScale(std::move(points));
    }

    /// {a, a+h, a+2h, ...} up to and including the largest a+kh <= b
    /// (with a relative slack of 1e-9*h so dyadic endpoints are kept).
    static TimeScale uniform(double a, double b, double h) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw Error(ErrorKind::InvalidArgument, "uniform step h must be positive and finite");
        }
        if (!(a < b)) {
            throw Error(ErrorKind::InvalidArgument, "uniform family needs a < b");
        }
        const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
        std::vector<double> pts(count);
        for (std::size_t k = 0; k < count; ++k) pts[k] = a + static_cast<double>(k) * h;
        return from_points(std::move(pts));
    }

    /// n equally spaced points covering [a, b] exactly; the dense-sampling
    /// route for intervals that are continuous in the underlying problem.
    static TimeScale sampled(double a, double b, std::size_t n) {
        if (n < 2) throw Error(ErrorKind::InvalidArgument, "sample family needs n >= 2");
        if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "sample family needs a < b");
        std::vector<double> pts(n);
        const double h = (b - a) / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k) pts[k] = a + static_cast<double>(k) * h;
        pts[n - 1] = b;
        return from_points(std::move(pts));
    }

    /// Geometric grid {t0, t0*q, ..., t0*q^{n-1}} with t0 > 0, q > 1.
    static TimeScale q_scale(double t0, double q, std::size_t n) {
        if (!(t0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "q-scale needs t0 > 0");
        if (!(q > 1.0)) throw Error(ErrorKind::InvalidArgument, "q-scale needs q > 1");
        if (n < 2) throw Error(ErrorKind::InvalidArgument, "q-scale needs n >= 2");
        std::vector<double> pts(n);
        double t = t0;
        for (std::size_t k = 0; k < n; ++k, t *= q) pts[k] = t;
        return from_points(std::move(pts));
    }

    /// Concatenates segments in order; the result must still be strictly
    /// increasing (overlapping or touching segments are an error).
    static TimeScale mixed(const std::vector<std::vector<double>>& segments) {
        std::vector<double> pts;
        for (const auto& seg : segments) pts.insert(pts.end(), seg.begin(), seg.end());
        return from_points(std::move(pts));
    }

    std::size_t size() const noexcept { return points_.size(); }
    double point(std::size_t i) const {
        check_index(i);
        return points_[i];
    }
    const std::vector<double>& points() const noexcept { return points_; }

    double a() const noexcept { return points_.front(); }
    double b() const noexcept { return points_.back(); }

    /// Forward jump: the next grid point, or the right endpoint itself.
    double sigma(std::size_t i) const {
        check_index(i);
        return i + 1 < points_.size() ? points_[i + 1] : points_.back();
    }

    /// Graininess mu(t_i) = sigma(t_i) - t_i; zero only at the right endpoint.
    double graininess(std::size_t i) const { return sigma(i) - point(i); }

    bool same_grid(const TimeScale& other) const noexcept {
        return this == &other || points_ == other.points_;
    }

private:
    explicit TimeScale(std::vector<double> points) : points_(std::move(points)) {}

    void check_index(std::size_t i) const {
        if (i >= points_.size()) {
            throw Error(ErrorKind::IndexOutOfRange,
                        "index " + std::to_string(i) + " >= n=" + std::to_string(points_.size()));
        }
    }

    std::vector<double> points_;
};

using TimeScalePtr = std::shared_ptr<const TimeScale>;

inline TimeScalePtr share(TimeScale ts) { return std::make_shared<const TimeScale>(std::move(ts)); }

} // namespace tempus

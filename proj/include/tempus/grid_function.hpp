#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempus/errors.hpp"
#include "tempus/time_scale.hpp"
#include "tempus/tolerances.hpp"

namespace tempus {

/// Real values aligned one-to-one with the points of a TimeScale.
/// Immutable; every value is finite by construction.
class GridFunction {
public:
    GridFunction(TimeScalePtr ts, std::vector<double> values)
        : ts_(std::move(ts)), values_(std::move(values)) {
        if (!ts_) throw Error(ErrorKind::InvalidArgument, "grid function needs a time scale");
        if (values_.size() != ts_->size()) {
            throw Error(ErrorKind::MisalignedGrids,
                        "value count " + std::to_string(values_.size()) + " != grid size " +
                            std::to_string(ts_->size()));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw Error(ErrorKind::NonFiniteValue,
                            "grid value at index " + std::to_string(i) + " is not finite");
            }
        }
    }

    /// Samples fn(t) at every grid point.
    static GridFunction sample(const TimeScalePtr& ts, const std::function<double(double)>& fn) {
        std::vector<double> v(ts->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(ts->point(i));
        return GridFunction(ts, std::move(v));
    }

    static GridFunction constant(const TimeScalePtr& ts, double value) {
        return GridFunction(ts, std::vector<double>(ts->size(), value));
    }

    static GridFunction zero(const TimeScalePtr& ts) { return constant(ts, 0.0); }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    const TimeScalePtr& scale_ptr() const noexcept { return ts_; }
    const TimeScale& time_scale() const noexcept { return *ts_; }

    bool aligned_with(const GridFunction& other) const noexcept {
        return ts_->same_grid(*other.ts_);
    }

    GridFunction with_values(std::vector<double> values) const {
        return GridFunction(ts_, std::move(values));
    }

private:
    TimeScalePtr ts_;
    std::vector<double> values_;
};

inline void require_aligned(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!a.aligned_with(b)) {
        throw Error(ErrorKind::MisalignedGrids, std::string(what) + ": grids differ");
    }
}

inline double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    require_aligned(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_aligned(a, b, "operator+");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return a.with_values(std::move(v));
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_aligned(a, b, "operator-");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return a.with_values(std::move(v));
}

inline GridFunction operator*(double c, const GridFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * f[i];
    return f.with_values(std::move(v));
}

inline GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
    require_aligned(a, b, "pointwise_product");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
    return a.with_values(std::move(v));
}

/// True when 1 + mu*p is far enough from zero to divide by safely.
inline bool regressivity_ok(double mu, double p) {
    const double factor = 1.0 + mu * p;
    return std::abs(factor) > tol::kRegressivity * std::max(1.0, std::abs(mu * p));
}

/// A grid function intended as a dynamic-equation coefficient, tagged with a
/// per-point record of where 1 + mu(t)*p(t) is safely nonzero. The right
/// endpoint (mu = 0) is always regressive.
class Coefficient {
public:
    explicit Coefficient(GridFunction fn) : fn_(std::move(fn)), regressive_(fn_.size(), true) {
        const TimeScale& ts = fn_.time_scale();
        for (std::size_t i = 0; i < fn_.size(); ++i) {
            regressive_[i] = regressivity_ok(ts.graininess(i), fn_[i]);
        }
    }

    static Coefficient constant(const TimeScalePtr& ts, double value) {
        return Coefficient(GridFunction::constant(ts, value));
    }

    const GridFunction& fn() const noexcept { return fn_; }
    std::size_t size() const noexcept { return fn_.size(); }
    double operator[](std::size_t i) const { return fn_[i]; }

    bool regressive_at(std::size_t i) const { return regressive_.at(i); }

    std::optional<std::size_t> first_non_regressive() const {
        for (std::size_t i = 0; i < regressive_.size(); ++i) {
            if (!regressive_[i]) return i;
        }
        return std::nullopt;
    }

    bool regressive_everywhere() const { return !first_non_regressive().has_value(); }

    void require_regressive(const char* what) const {
        if (auto i = first_non_regressive()) {
            throw Error(ErrorKind::NonRegressive,
                        std::string(what) + ": 1 + mu*p vanishes at index " + std::to_string(*i) +
                            " (t=" + std::to_string(fn_.time_scale().point(*i)) + ")");
        }
    }

private:
    GridFunction fn_;
    std::vector<bool> regressive_;
};

} // namespace tempus

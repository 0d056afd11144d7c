#pragma once

// Shared helpers for the test suite: randomized grid and coefficient
// generators with bounded exponential drift, and process helpers for the
// tests that drive the command line tool.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <stdexcept>
#include <utility>

#include <tempus/errors.hpp>
#include <tempus/grid_function.hpp>
#include <tempus/rng.hpp>
#include <tempus/time_scale.hpp>

namespace testsupport {

/// Runs fn, which must throw tempus::Error, and returns the error kind.
template <typename Fn>
inline tempus::ErrorKind error_kind_of(Fn&& fn) {
    try {
        std::forward<Fn>(fn)();
    } catch (const tempus::Error& e) {
        return e.kind();
    }
    throw std::logic_error("expected a tempus::Error, none was thrown");
}

/// Random isolated grid with size in [min_points, max_points], drawn from
/// the uniform, geometric, jittered, and multi-segment families.
inline tempus::TimeScalePtr random_timescale(tempus::SplitMix64& rng, std::size_t min_points,
                                             std::size_t max_points) {
    const std::size_t n = min_points + rng.below(max_points - min_points + 1);
    switch (rng.below(4)) {
        case 0: { // uniform
            const double a = rng.uniform(-2.0, 2.0);
            const double h = rng.uniform(1e-3, 0.5);
            std::vector<double> pts(n);
            for (std::size_t k = 0; k < n; ++k) pts[k] = a + static_cast<double>(k) * h;
            return tempus::share(tempus::TimeScale::from_points(std::move(pts)));
        }
        case 1: { // geometric, capped so the largest point stays below 1e6
            const double t0 = rng.uniform(0.5, 2.0);
            const double q = rng.uniform(1.05, 1.3);
            const auto cap = static_cast<std::size_t>(std::log(1e6 / t0) / std::log(q));
            return tempus::share(tempus::TimeScale::q_scale(t0, q, std::min(n, cap)));
        }
        case 2: { // jittered increments
            std::vector<double> pts(n);
            pts[0] = rng.uniform(-1.0, 1.0);
            for (std::size_t k = 1; k < n; ++k) pts[k] = pts[k - 1] + rng.uniform(1e-3, 0.3);
            return tempus::share(tempus::TimeScale::from_points(std::move(pts)));
        }
        default: { // two uniform segments with different steps
            const std::size_t n1 = 1 + rng.below(n > 2 ? n - 2 : 1);
            const double h1 = rng.uniform(0.01, 0.3);
            const double h2 = rng.uniform(0.01, 0.3);
            std::vector<double> seg1(n1 + 1), seg2(n >= n1 + 1 ? n - n1 - 1 : 0);
            for (std::size_t k = 0; k <= n1; ++k) seg1[k] = static_cast<double>(k) * h1;
            for (std::size_t k = 0; k < seg2.size(); ++k)
                seg2[k] = seg1.back() + 0.5 + static_cast<double>(k) * h2;
            if (seg2.empty()) return tempus::share(tempus::TimeScale::from_points(std::move(seg1)));
            return tempus::share(tempus::TimeScale::mixed({seg1, seg2}));
        }
    }
}

/// Regressive coefficient whose per-step factors 1 + mu*d have magnitude in
/// [exp(-drift), exp(drift)], keeping every exponential product finite. A
/// small fraction of factors are negative when sign flips are allowed.
inline tempus::Coefficient random_regressive_coefficient(tempus::SplitMix64& rng,
                                                         const tempus::TimeScalePtr& ts,
                                                         bool allow_sign_flips = true,
                                                         double drift = 0.35) {
    const std::size_t n = ts->size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double factor = std::exp(rng.uniform(-drift, drift));
        if (allow_sign_flips && rng.uniform01() < 0.1) factor = -factor;
        d[i] = (factor - 1.0) / ts->graininess(i);
    }
    if (n >= 2) d[n - 1] = d[n - 2];
    return tempus::Coefficient(tempus::GridFunction(ts, std::move(d)));
}

/// Grid function with values uniform in [-amplitude, amplitude].
inline tempus::GridFunction random_grid_function(tempus::SplitMix64& rng,
                                                 const tempus::TimeScalePtr& ts,
                                                 double amplitude) {
    std::vector<double> v(ts->size());
    for (double& x : v) x = rng.uniform(-amplitude, amplitude);
    return tempus::GridFunction(ts, std::move(v));
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::string path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path = (base / ("tempus-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter++)))
                   .string();
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return path + "/" + name; }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

#ifdef TEMPUS_CLI_EXE
/// Runs the command line tool with the given arguments, capturing stdout and
/// stderr into files under `dir`. Returns the process exit status.
inline int run_cli(const std::string& args, const TempDir& dir,
                   const std::string& tag = "run") {
    const std::string cmd = std::string(TEMPUS_CLI_EXE) + " " + args + " > " + dir.file(tag + ".out") +
                            " 2> " + dir.file(tag + ".err");
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    if (WIFEXITED(rc)) return WEXITSTATUS(rc);
    return -1;
}
#endif

} // namespace testsupport

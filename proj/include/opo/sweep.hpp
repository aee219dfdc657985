#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opo/analysis.hpp"

namespace opo {

inline constexpr const char* kVersion = "opo-cavity 1.0.0";

/// Names of the parameters a sweep may vary.
enum class ParamName { t, phi, theta, G, R };

std::string_view to_string(ParamName name) noexcept;
ParamName param_from_string(std::string_view name);
double& param_ref(CavityParams& p, ParamName name);

/// A named grid of strictly increasing values.
struct SweepAxis {
    ParamName name;
    std::vector<double> values;
};

/// Evenly spaced axis description: `count` points from lo to hi inclusive.
struct AxisSpec {
    ParamName name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    SweepAxis materialize() const;
};

struct SweepRecord {
    CavityParams params;
    /// nullopt when the solver is at or above threshold.
    std::optional<PhotonNumbers> photons;
    KFactorResult k;
};

struct SweepResult {
    CavityParams fixed;
    std::vector<SweepAxis> axes;
    /// Row-major over the axes (first axis outermost).
    std::vector<SweepRecord> records;
    std::string version = kVersion;

    std::size_t extent(std::size_t axis) const { return axes.at(axis).values.size(); }
};

/// Evaluates photon numbers and K on every grid point. Threshold points are
/// recorded with no photon numbers rather than dropped. `threads` = 0 picks
/// the hardware concurrency. Row order never depends on the thread count.
SweepResult sweep(const CavityParams& fixed, const std::vector<SweepAxis>& axes, unsigned threads = 0);

/// Serializable sweep request.
struct SweepPlan {
    CavityParams fixed;
    std::vector<AxisSpec> axes;

    /// Throws InvalidParameter on an empty grid, a repeated axis, a
    /// non-increasing axis or out-of-range values.
    void validate() const;

    /// t in [0, 1] x phi in [0, pi/2], 101 x 101, G = 1.01, R = 0.2, theta = 0.
    static SweepPlan figure2();
    /// phi = pi/8, t in [0, 1] with 1001 points, G = 1.01, R = 0.2, theta = 0.
    static SweepPlan figure3();
};

SweepResult run_sweep(const SweepPlan& plan, unsigned threads = 0);

}  // namespace opo

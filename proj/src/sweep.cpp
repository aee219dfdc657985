#include "opo/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace opo {

std::string_view to_string(ParamName name) noexcept {
    switch (name) {
        case ParamName::t: return "t";
        case ParamName::phi: return "phi";
        case ParamName::theta: return "theta";
        case ParamName::G: return "G";
        case ParamName::R: return "R";
    }
    return "?";
}

ParamName param_from_string(std::string_view name) {
    for (auto p : {ParamName::t, ParamName::phi, ParamName::theta, ParamName::G, ParamName::R}) {
        if (to_string(p) == name) return p;
    }
    throw InvalidParameter("unknown sweep parameter '" + std::string(name) + "' (expected t, phi, theta, G or R)");
}

double& param_ref(CavityParams& p, ParamName name) {
    switch (name) {
        case ParamName::t: return p.t;
        case ParamName::phi: return p.phi;
        case ParamName::theta: return p.theta;
        case ParamName::G: return p.G;
        case ParamName::R: return p.R;
    }
    throw InvalidParameter("unknown sweep parameter");
}

SweepAxis AxisSpec::materialize() const {
    SweepAxis axis{name, {}};
    axis.values.reserve(count);
    if (count == 1) {
        axis.values.push_back(lo);
        return axis;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        axis.values.push_back(i + 1 == count ? hi : lo + step * static_cast<double>(i));
    }
    return axis;
}

namespace {

void validate_axes(const CavityParams& fixed, const std::vector<SweepAxis>& axes) {
    if (axes.empty()) throw InvalidParameter("sweep needs at least one axis");
    std::set<ParamName> seen;
    for (const auto& axis : axes) {
        const auto label = std::string(to_string(axis.name));
        if (!seen.insert(axis.name).second) throw InvalidParameter("axis '" + label + "' given more than once");
        if (axis.values.empty()) throw InvalidParameter("axis '" + label + "' is empty");
        for (std::size_t i = 0; i < axis.values.size(); ++i) {
            if (i > 0 && !(axis.values[i] > axis.values[i - 1])) {
                throw InvalidParameter("axis '" + label + "' must be strictly increasing");
            }
            CavityParams probe = fixed;
            param_ref(probe, axis.name) = axis.values[i];
            probe.validate();
        }
    }
    fixed.validate();
}

SweepRecord evaluate(const CavityParams& p) {
    SweepRecord rec{p, std::nullopt, k_factor(p)};
    try {
        rec.photons = photon_numbers(p);
    } catch (const SingularAtThreshold&) {
        rec.photons.reset();
    }
    return rec;
}

}  // namespace

SweepResult sweep(const CavityParams& fixed, const std::vector<SweepAxis>& axes, unsigned threads) {
    validate_axes(fixed, axes);

    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.values.size();

    auto point = [&](std::size_t flat) {
        CavityParams p = fixed;
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto n = axes[k].values.size();
            param_ref(p, axes[k].name) = axes[k].values[flat % n];
            flat /= n;
        }
        return p;
    };

    SweepResult result{fixed, axes, std::vector<SweepRecord>(total), kVersion};

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            result.records[i] = evaluate(point(i));
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    return result;
}

void SweepPlan::validate() const {
    if (axes.empty()) throw InvalidParameter("empty grid: no sweep axes given");
    for (const auto& a : axes) {
        const auto label = std::string(to_string(a.name));
        if (a.count == 0) throw InvalidParameter("empty grid: axis '" + label + "' has zero points");
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) throw InvalidParameter("axis '" + label + "' bounds must be finite");
        if (a.count > 1 && !(a.hi > a.lo)) throw InvalidParameter("axis '" + label + "' needs lo < hi");
    }
    std::vector<SweepAxis> grids;
    for (const auto& a : axes) grids.push_back(a.materialize());
    validate_axes(fixed, grids);
}

SweepPlan SweepPlan::figure2() {
    return SweepPlan{CavityParams{1.01, 0.2, 1.0, 0.0, 0.0},
                     {AxisSpec{ParamName::t, 0.0, 1.0, 101}, AxisSpec{ParamName::phi, 0.0, std::numbers::pi / 2, 101}}};
}

SweepPlan SweepPlan::figure3() {
    return SweepPlan{CavityParams{1.01, 0.2, 1.0, std::numbers::pi / 8, 0.0}, {AxisSpec{ParamName::t, 0.0, 1.0, 1001}}};
}

SweepResult run_sweep(const SweepPlan& plan, unsigned threads) {
    plan.validate();
    std::vector<SweepAxis> axes;
    for (const auto& a : plan.axes) axes.push_back(a.materialize());
    return sweep(plan.fixed, axes, threads);
}

}  // namespace opo

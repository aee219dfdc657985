#include "opo/checks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "opo/analysis.hpp"

namespace opo {

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform draws that also fold every value into an FNV-1a fingerprint.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        const double x = std::uniform_real_distribution<double>(lo, hi)(rng_);
        auto bits = std::bit_cast<std::uint64_t>(x);
        for (int i = 0; i < 8; ++i) {
            hash_ ^= (bits >> (8 * i)) & 0xffu;
            hash_ *= 0x100000001b3ull;
        }
        return x;
    }

    CavityParams sub_threshold() {
        CavityParams p;
        p.R = uniform(0.01, 0.95);
        p.G = uniform(1.0, 1.0 + 0.99 * (threshold_gain(p.R) - 1.0));
        p.t = uniform(0.0, 1.0);
        p.phi = uniform(-kPi, kPi);
        p.theta = uniform(0.0, kPi);
        return p;
    }

    std::uint64_t fingerprint() const { return hash_; }

private:
    std::mt19937_64 rng_;
    std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

double relative(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

}  // namespace

Fault fault_from_string(std::string_view name) {
    if (name == "none") return Fault::None;
    if (name == "left-mirror-sign") return Fault::LeftMirrorSign;
    throw InvalidParameter("unknown fault '" + std::string(name) + "' (expected none or left-mirror-sign)");
}

CavityNetwork network_with_fault(const CavityParams& p, Fault fault) {
    auto net = CavityNetwork::standard(p);
    if (fault == Fault::LeftMirrorSign) {
        for (auto& e : net.chain) {
            if (e.kind == ElementKind::LeftMirror) e = ElementSpec{ElementKind::Delay, 0.0, e.direction};
        }
    }
    return net;
}

bool CheckReport::all_passed() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& c) { return c.passed; });
}

CheckReport run_invariant_checks(const CheckOptions& options) {
    Sampler sampler(options.seed);
    CheckReport report;
    auto record = [&](std::string name, double dev, double tol) {
        report.outcomes.push_back(CheckOutcome{std::move(name), dev, tol, dev <= tol});
    };

    double dev = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        const double R = sampler.uniform(0.0, 0.99);
        const double G = sampler.uniform(1.0, 3.0);
        const double t = sampler.uniform(0.0, 1.0);
        const double phi = sampler.uniform(-kPi, kPi);
        const double theta = sampler.uniform(-kPi, kPi);
        for (auto dir : {Direction::Left, Direction::Right}) {
            dev = std::max({dev, rotator_relations(phi, dir).canonical_deviation(),
                            crystal_relations(G, dir).canonical_deviation(),
                            absorber_relations(t, dir).canonical_deviation()});
        }
        dev = std::max({dev, right_mirror_relations(R).canonical_deviation(),
                        delay_relations(theta).canonical_deviation(), left_mirror_relations().canonical_deviation()});
    }
    record("element maps are canonical", dev, 1e-12);

    dev = 0.0;
    double noise_dev = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        CavityParams p;
        p.G = sampler.uniform(1.0, 3.0);
        p.t = sampler.uniform(0.0, 1.0);
        p.phi = sampler.uniform(-kPi, kPi);
        p.theta = sampler.uniform(-kPi, kPi);
        const auto assembled = build_round_trip(network_with_fault(p, options.fault));
        dev = std::max(dev, max_abs_difference(assembled, round_trip_closed_form(p)));

        const double loss = 1.0 - std::pow(p.t, 4);
        const double c = std::cos(p.phi), s = std::sin(p.phi);
        const cplx expected[2][2] = {{loss * c * c, -loss * s * c}, {-loss * s * c, loss * s * s}};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                noise_dev = std::max(noise_dev, std::abs(commutator(assembled.noise[a], assembled.noise[b]) - expected[a][b]));
            }
        }
    }
    record("round trip matches closed form", dev, 1e-12);
    record("noise commutators match closed form", noise_dev, 1e-12);

    dev = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        const CavityParams p = sampler.sub_threshold();
        try {
            const auto sol = solve_input_output(build_round_trip(network_with_fault(p, options.fault)), p.R);
            const auto& a = sol.out_a;
            const auto& b = sol.out_b;
            dev = std::max({dev, std::abs(commutator(a, a) - 1.0), std::abs(commutator(b, b) - 1.0),
                            std::abs(commutator(a, b)), std::abs(commutator(a, b.dagger()))});
        } catch (const SingularAtThreshold&) {
            dev = std::numeric_limits<double>::infinity();
        }
    }
    record("output commutation relations", dev, 1e-10);

    dev = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        CavityParams p = sampler.sub_threshold();
        p.t = 1.0;
        p.phi = 0.0;
        try {
            const auto sol = solve_input_output(build_round_trip(network_with_fault(p, options.fault)), p.R);
            const double oracle = orthogonal_mode_closed_form(p.G, p.R, p.theta);
            const double n_a = vacuum_photon_number(sol.out_a);
            dev = std::max(dev, oracle == 0.0 ? std::abs(n_a) : relative(n_a, oracle));
        } catch (const SingularAtThreshold&) {
            dev = std::numeric_limits<double>::infinity();
        }
    }
    record("orthogonal-mode photon number matches closed form", dev, 1e-10);

    dev = 0.0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        CavityParams p;
        p.phi = sampler.uniform(-kPi, kPi);
        p.t = sampler.uniform(0.0, 1.0);
        if (std::abs(p.t - critical_transmission(p.phi)) <= kCriticalBand) continue;
        const auto cold = RoundTripMatrix::decompose(
            build_round_trip(network_with_fault(p, options.fault)).annihilation_block());
        const auto K = cold.petermann(0);
        dev = std::max(dev, K ? relative(*K, k_factor_closed_form(p.t, p.phi)) : std::numeric_limits<double>::infinity());
    }
    record("K factor matches closed form", dev, 1e-8);

    report.sample_fingerprint = sampler.fingerprint();
    return report;
}

}  // namespace opo

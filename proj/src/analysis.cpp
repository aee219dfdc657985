#include "opo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace opo {

namespace {

// |sin 2phi| below this is treated as a polarization-preserving round trip.
constexpr double kOrthogonalRotation = 1e-12;

Eigen::Vector2cd null_vector(const Eigen::Matrix2cd& B) {
    // Either row of a rank-1 2x2 matrix gives a null vector; take the
    // better-conditioned one.
    const Eigen::Vector2cd from_row0(B(0, 1), -B(0, 0));
    const Eigen::Vector2cd from_row1(-B(1, 1), B(1, 0));
    const Eigen::Vector2cd& v = from_row0.squaredNorm() >= from_row1.squaredNorm() ? from_row0 : from_row1;
    return v.normalized();
}

}  // namespace

PhotonNumbers photon_numbers(const CavityParams& p) {
    const auto sol = solve_input_output(p);
    PhotonNumbers n;
    n.n_a = vacuum_photon_number(sol.out_a);
    n.n_b = vacuum_photon_number(sol.out_b);
    n.total = n.n_a + n.n_b;
    return n;
}

double orthogonal_mode_closed_form(double G, double R, double theta) {
    ElementSpec{ElementKind::Crystal, G}.validate();
    ElementSpec{ElementKind::RightMirror, R}.validate();
    ElementSpec{ElementKind::Delay, theta}.validate();
    const double den = 1.0 - 2.0 * G * std::sqrt(R) * std::cos(2.0 * theta) + R;
    if (std::abs(den) <= 1e-12) {
        std::ostringstream msg;
        msg << "orthogonal-mode photon number diverges at G = " << G << ", R = " << R << ", theta = " << theta;
        throw DivergentAtThreshold(msg.str());
    }
    const double bracket = (1.0 - R) / den;
    return (G * G - 1.0) * bracket * bracket;
}

double modification_factor(double R, double theta) {
    ElementSpec{ElementKind::RightMirror, R}.validate();
    ElementSpec{ElementKind::Delay, theta}.validate();
    return (1.0 - R) / (1.0 - 2.0 * std::sqrt(R) * std::cos(2.0 * theta) + R);
}

double threshold_gain(double R) {
    if (!(R > 0.0 && R < 1.0)) {
        std::ostringstream msg;
        msg << "threshold gain needs 0 < R < 1, got R = " << R;
        throw InvalidParameter(msg.str());
    }
    return (1.0 + R) / (2.0 * std::sqrt(R));
}

double critical_transmission(double phi) {
    if (!std::isfinite(phi)) throw InvalidParameter("phi must be finite");
    const double s = std::abs(std::sin(2.0 * phi));
    return std::sqrt((1.0 - s) / (1.0 + s));
}

RoundTripMatrix RoundTripMatrix::decompose(const Eigen::Matrix2cd& M) {
    RoundTripMatrix rt;
    rt.M = M;
    const cplx a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
    const double scale = M.cwiseAbs().maxCoeff();
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * scale;

    if (std::abs(b) <= tiny && std::abs(c) <= tiny && std::abs(a - d) <= tiny) {
        // Scalar matrix: any basis diagonalizes it.
        rt.eigenvalues = {a, d};
        rt.right = {Eigen::Vector2cd::UnitX(), Eigen::Vector2cd::UnitY()};
        rt.left = rt.right;
        return rt;
    }

    const cplx mean = 0.5 * (a + d);
    const cplx half = 0.5 * (a - d);
    const cplx root = std::sqrt(half * half + b * c);
    rt.eigenvalues = {mean + root, mean - root};

    const Eigen::Matrix2cd Madj = M.adjoint();
    for (std::size_t n = 0; n < 2; ++n) {
        const cplx lambda = rt.eigenvalues[n];
        rt.right[n] = null_vector(M - lambda * Eigen::Matrix2cd::Identity());
        // l^dag M = lambda l^dag  <=>  M^dag l = conj(lambda) l
        rt.left[n] = null_vector(Madj - std::conj(lambda) * Eigen::Matrix2cd::Identity());
    }
    return rt;
}

std::optional<double> RoundTripMatrix::petermann(std::size_t n) const {
    const auto& e = right.at(n);
    const auto& l = left.at(n);
    const double norms = e.squaredNorm() * l.squaredNorm();
    const double overlap = std::norm(l.dot(e));
    if (overlap < kOverlapFloor * norms) return std::nullopt;
    // Cauchy-Schwarz bounds K below by 1; clip rounding.
    return std::max(1.0, norms / overlap);
}

RoundTripMatrix cold_round_trip(const CavityParams& p) {
    CavityParams cold = p;
    cold.G = 1.0;
    return RoundTripMatrix::decompose(build_round_trip(cold).annihilation_block());
}

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::Locked: return "Locked";
        case Regime::Unlocked: return "Unlocked";
        case Regime::Critical: return "Critical";
    }
    return "Unknown";
}

Regime classify_regime(double t, double phi) {
    ElementSpec{ElementKind::Absorber, t}.validate();
    const double tc = critical_transmission(phi);
    // With sin 2phi = 0 the eigenmodes are the polarization axes for every t;
    // t_c = 1 is then not an exceptional point.
    if (std::abs(std::sin(2.0 * phi)) <= kOrthogonalRotation) return Regime::Locked;
    if (std::abs(t - tc) <= kCriticalBand) return Regime::Critical;
    return t < tc ? Regime::Locked : Regime::Unlocked;
}

double k_factor_closed_form(double t, double phi) {
    ElementSpec{ElementKind::Absorber, t}.validate();
    const double s2 = std::sin(2.0 * phi);
    if (std::abs(s2) <= kOrthogonalRotation) return 1.0;
    const double loss = (1.0 - t * t) * (1.0 - t * t);
    const double rot = (1.0 + t * t) * (1.0 + t * t) * s2 * s2;
    const double tc = critical_transmission(phi);
    if (t == tc || loss == rot) return std::numeric_limits<double>::infinity();
    return t < tc ? loss / (loss - rot) : rot / (rot - loss);
}

KFactorResult k_factor(const CavityParams& p) {
    const auto rt = cold_round_trip(p);
    KFactorResult result;
    result.t_c = critical_transmission(p.phi);
    result.regime = classify_regime(p.t, p.phi);

    const auto k1 = rt.petermann(0);
    const auto k2 = rt.petermann(1);
    if (!k1 || !k2) {
        result.K.reset();
        result.regime = Regime::Critical;
        return result;
    }
    if (result.regime != Regime::Critical && std::abs(*k1 - *k2) > 1e-9 * std::max(*k1, *k2)) {
        std::ostringstream msg;
        msg << "eigenmode K factors disagree: " << *k1 << " vs " << *k2;
        throw std::logic_error(msg.str());
    }
    result.K = 0.5 * (*k1 + *k2);
    return result;
}

}  // namespace opo

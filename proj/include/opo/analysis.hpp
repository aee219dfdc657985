#pragma once

// Observables of the cavity: output photon numbers, the cold-cavity
// round-trip matrix with its Petermann K factor, and the closed forms
// used to cross-check them.

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "opo/cavity.hpp"

namespace opo {

class DivergentAtThreshold : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhotonNumbers {
    double n_a = 0.0;
    double n_b = 0.0;
    double total = 0.0;
};

/// Vacuum-input photon numbers of a_out and b_out. Throws
/// SingularAtThreshold at or above threshold.
PhotonNumbers photon_numbers(const CavityParams& p);

/// Photon number per mode for orthogonal modes (t = 1, phi = 0):
///   (G^2 - 1) [(1 - R) / (1 - 2 G sqrt(R) cos 2theta + R)]^2
double orthogonal_mode_closed_form(double G, double R, double theta);

/// The bracket above at G = 1 (spontaneous emission modification factor).
/// Diagnostic only.
double modification_factor(double R, double theta);

/// (1 + R) / (2 sqrt R). R must be in (0, 1).
double threshold_gain(double R);

/// sqrt((1 - |sin 2phi|) / (1 + |sin 2phi|)).
double critical_transmission(double phi);

/// Cold-cavity round-trip matrix with right and left (adjoint)
/// eigenvectors, paired by eigenvalue and normalized to unit length.
struct RoundTripMatrix {
    Eigen::Matrix2cd M;
    std::array<cplx, 2> eigenvalues;
    std::array<Eigen::Vector2cd, 2> right;
    std::array<Eigen::Vector2cd, 2> left;

    static RoundTripMatrix decompose(const Eigen::Matrix2cd& M);

    /// (e^dag e)(l^dag l) / |l^dag e|^2 for eigenmode n, or nullopt when the
    /// overlap vanishes (eigenvectors coalesced).
    std::optional<double> petermann(std::size_t n) const;
};

/// Annihilation block of the assembled round trip at G = 1.
RoundTripMatrix cold_round_trip(const CavityParams& p);

enum class Regime { Locked, Unlocked, Critical };

std::string_view to_string(Regime regime) noexcept;

/// Points closer than this to t_c are flagged Critical.
inline constexpr double kCriticalBand = 1e-3;
/// Overlap guard: K is Divergent when |l^dag e|^2 < kOverlapFloor (e^dag e)(l^dag l).
inline constexpr double kOverlapFloor = 1e-12;

struct KFactorResult {
    std::optional<double> K;  // nullopt = Divergent
    Regime regime = Regime::Locked;
    double t_c = 1.0;

    bool divergent() const noexcept { return !K.has_value(); }
};

/// Petermann factor from the eigenvectors of the cold round trip. G is
/// ignored.
KFactorResult k_factor(const CavityParams& p);

/// Closed forms K_< (t < t_c) and K_> (t > t_c). Returns +inf at t = t_c
/// and 1 when sin 2phi = 0.
double k_factor_closed_form(double t, double phi);

/// Locked / Unlocked from t against t_c(phi), Critical within kCriticalBand
/// of a genuine exceptional point (sin 2phi != 0).
Regime classify_regime(double t, double phi);

}  // namespace opo

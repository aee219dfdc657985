#pragma once

// Two-mirror cavity with a polarization rotator, a parametric crystal, a
// polarization-dependent absorber and a delay line. The right mirror
// (reflectivity R) is the output coupler, the left mirror is perfect.
//
// Intracavity operators are taken at the right mirror: x_1L leaves it
// travelling left, x_1R arrives at it travelling right.

#include <array>
#include <stdexcept>
#include <vector>

#include "opo/bogoliubov.hpp"
#include "opo/optical_elements.hpp"

namespace opo {

struct CavityParams {
    double G = 1.0;      // crystal gain, >= 1
    double R = 0.0;      // output mirror reflectivity, [0, 1)
    double t = 1.0;      // absorber amplitude transmission, [0, 1]
    double phi = 0.0;    // rotator angle (rad)
    double theta = 0.0;  // half round-trip phase omega L / c (rad)

    /// Throws InvalidParameter with a readable message.
    void validate() const;

    friend bool operator==(const CavityParams&, const CavityParams&) = default;
};

/// The closed-loop system is singular or unstable: the device is at or
/// above its oscillation threshold.
class SingularAtThreshold : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered element chain from x_1L back to x_1R (left pass, left mirror,
/// right pass). The right mirror is not part of the chain.
struct CavityNetwork {
    std::vector<ElementSpec> chain;

    static CavityNetwork standard(const CavityParams& p);
};

/// x_1R = A_ann x_1L + A_cre x_1L^dag + noise, stored in doubled form.
struct RoundTripRelation {
    /// 4x4 over (a_1L, b_1L, a_1L^dag, b_1L^dag).
    CMatrix A;
    /// (f_a, f_b, f_a^dag, f_b^dag) over the cavity input basis.
    std::vector<OperatorExpansion> noise;

    Eigen::Matrix2cd annihilation_block() const { return A.topLeftCorner(2, 2); }
    Eigen::Matrix2cd creation_block() const { return A.topRightCorner(2, 2); }
};

RoundTripRelation build_round_trip(const CavityParams& p);
RoundTripRelation build_round_trip(const CavityNetwork& network);

/// The analytic round trip (gamma_j, S_j, C_ij^+- form). The f_L,in
/// coefficient carries the phase -exp(2i theta) picked up on the way from
/// the left absorber through the left mirror and back; this is a
/// relabeling of an independent vacuum port and leaves every moment
/// unchanged.
RoundTripRelation round_trip_closed_form(const CavityParams& p);

/// The noise vector exactly as usually printed, r (t f_L + f_R)(cos, -sin),
/// without the reservoir phase. Used to cross-check magnitudes.
std::array<OperatorExpansion, 2> noise_without_reservoir_phase(const CavityParams& p);

/// Largest entrywise deviation over A and all noise coefficients.
double max_abs_difference(const RoundTripRelation& a, const RoundTripRelation& b);

struct InputOutputSolution {
    OperatorExpansion out_a;
    OperatorExpansion out_b;
    /// a_1L, b_1L, a_1R, b_1R.
    std::vector<OperatorExpansion> intracavity;
    /// Rows out_a, out_b; columns the u then v coefficients over
    /// (a_in, b_in, f_L,in, f_R,in).
    Eigen::Matrix<cplx, 2, 8> coefficients;
    double condition_number = 1.0;
    /// Spectral radius of the closed-loop round trip; < 1 below threshold.
    double loop_gain = 0.0;
};

/// Condition-number ceiling of the closed-loop matrix.
inline constexpr double kMaxConditionNumber = 1e12;

InputOutputSolution solve_input_output(const CavityParams& p);
/// Solve with an explicit round trip (e.g. an altered network).
InputOutputSolution solve_input_output(const RoundTripRelation& round_trip, double reflectivity);

/// [f_i, f_j^dag] for i, j in {a, b}, computed from the assembled noise.
Eigen::Matrix2cd noise_commutators(const CavityParams& p);

}  // namespace opo

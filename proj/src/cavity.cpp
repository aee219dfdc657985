#include "opo/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opo {

namespace {

constexpr cplx kI{0.0, 1.0};

// Round-trip assembly runs over the cavity inputs plus the two
// intracavity unknowns.
BasisPtr working_basis() {
    static const BasisPtr basis = std::make_shared<const ModeBasis>(
        std::vector<std::string>{"a_1L", "b_1L", "a_in", "b_in", "f_L_in", "f_R_in"});
    return basis;
}

constexpr Eigen::Index kUnknowns = 2;

OperatorExpansion project_to_inputs(const OperatorExpansion& o) {
    const auto n = static_cast<Eigen::Index>(ModeBasis::cavity_inputs()->size());
    return OperatorExpansion(ModeBasis::cavity_inputs(), o.u().tail(n), o.v().tail(n));
}

std::vector<OperatorExpansion> with_daggers(const OperatorExpansion& fa, const OperatorExpansion& fb) {
    return {fa, fb, fa.dagger(), fb.dagger()};
}

CMatrix doubled_from_blocks(const Eigen::Matrix2cd& ann, const Eigen::Matrix2cd& cre) {
    CMatrix A(4, 4);
    A << ann, cre, cre.conjugate(), ann.conjugate();
    return A;
}

// Rows of the coefficient table: (u | v) over the input basis.
Eigen::Matrix<cplx, 1, 8> coefficient_row(const OperatorExpansion& o) {
    Eigen::Matrix<cplx, 1, 8> row;
    row << o.u().transpose(), o.v().transpose();
    return row;
}

OperatorExpansion expansion_from_row(const Eigen::Ref<const Eigen::Matrix<cplx, 1, Eigen::Dynamic>>& row) {
    return OperatorExpansion(ModeBasis::cavity_inputs(), row.head(4).transpose(), row.tail(4).transpose());
}

}  // namespace

void CavityParams::validate() const {
    ElementSpec{ElementKind::Crystal, G}.validate();
    ElementSpec{ElementKind::RightMirror, R}.validate();
    ElementSpec{ElementKind::Absorber, t}.validate();
    ElementSpec{ElementKind::Rotator, phi}.validate();
    ElementSpec{ElementKind::Delay, theta}.validate();
}

CavityNetwork CavityNetwork::standard(const CavityParams& p) {
    p.validate();
    return CavityNetwork{{
        {ElementKind::Rotator, p.phi, Direction::Left},
        {ElementKind::Crystal, p.G, Direction::Left},
        {ElementKind::Absorber, p.t, Direction::Left},
        {ElementKind::Delay, p.theta, Direction::Left},
        {ElementKind::LeftMirror, 0.0, Direction::Left},
        {ElementKind::Delay, p.theta, Direction::Right},
        {ElementKind::Absorber, p.t, Direction::Right},
        {ElementKind::Crystal, 1.0, Direction::Right},
        {ElementKind::Rotator, p.phi, Direction::Right},
    }};
}

RoundTripRelation build_round_trip(const CavityParams& p) {
    return build_round_trip(CavityNetwork::standard(p));
}

RoundTripRelation build_round_trip(const CavityNetwork& network) {
    const auto basis = working_basis();
    OperatorExpansion a = OperatorExpansion::mode(basis, "a_1L");
    OperatorExpansion b = OperatorExpansion::mode(basis, "b_1L");

    for (const auto& element : network.chain) {
        if (element.kind == ElementKind::RightMirror) {
            throw InvalidParameter("the right mirror closes the loop and cannot appear inside the round trip");
        }
        const BogoliubovMap map = element_map(element);
        std::vector<OperatorExpansion> ports{a, b};
        if (element.kind == ElementKind::Absorber) {
            ports.push_back(
                OperatorExpansion::mode(basis, element.direction == Direction::Left ? "f_L_in" : "f_R_in"));
        }
        auto out = apply_map(map, ports);
        a = out[0];
        b = out[1];
    }

    Eigen::Matrix2cd ann, cre;
    ann << a.u().head(kUnknowns).transpose(), b.u().head(kUnknowns).transpose();
    cre << a.v().head(kUnknowns).transpose(), b.v().head(kUnknowns).transpose();
    return RoundTripRelation{doubled_from_blocks(ann, cre), with_daggers(project_to_inputs(a), project_to_inputs(b))};
}

RoundTripRelation round_trip_closed_form(const CavityParams& p) {
    p.validate();
    const cplx phase = std::exp(2.0 * kI * p.theta);
    const double t2 = p.t * p.t;
    // gamma_j = e^{2i theta} (t^2 - (-1)^j) / 2
    const cplx gamma1 = phase * (t2 + 1.0) / 2.0;
    const cplx gamma2 = phase * (t2 - 1.0) / 2.0;
    const double c2 = std::cos(2.0 * p.phi);
    const double s2 = std::sin(2.0 * p.phi);
    const cplx S1 = gamma1 * s2;
    const cplx S2 = gamma2 * s2;
    const cplx C12p = gamma1 * c2 + gamma2;
    const cplx C12m = gamma1 * c2 - gamma2;
    const cplx C21p = gamma2 * c2 + gamma1;
    const cplx C21m = gamma2 * c2 - gamma1;
    const double Gt = std::sqrt(p.G * p.G - 1.0);

    Eigen::Matrix2cd ann, cre;
    ann << C12p, S1, -S1, C12m;
    cre << S2, -C21p, C21m, S2;
    ann *= -p.G;
    cre *= Gt;

    const cplx r = kI * std::sqrt(1.0 - t2);
    const auto basis = ModeBasis::cavity_inputs();
    CVector u = CVector::Zero(4);
    u[2] = -phase * p.t;
    u[3] = 1.0;
    const OperatorExpansion loss(basis, r * u, CVector::Zero(4));
    const OperatorExpansion fa = std::cos(p.phi) * loss;
    const OperatorExpansion fb = -std::sin(p.phi) * loss;
    return RoundTripRelation{doubled_from_blocks(ann, cre), with_daggers(fa, fb)};
}

std::array<OperatorExpansion, 2> noise_without_reservoir_phase(const CavityParams& p) {
    p.validate();
    const cplx r = kI * std::sqrt(1.0 - p.t * p.t);
    CVector u = CVector::Zero(4);
    u[2] = p.t;
    u[3] = 1.0;
    const OperatorExpansion loss(ModeBasis::cavity_inputs(), r * u, CVector::Zero(4));
    return {std::cos(p.phi) * loss, -std::sin(p.phi) * loss};
}

double max_abs_difference(const RoundTripRelation& a, const RoundTripRelation& b) {
    if (a.A.rows() != b.A.rows() || a.noise.size() != b.noise.size()) {
        throw DimensionMismatch("round-trip relations have different shapes");
    }
    double dev = (a.A - b.A).cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < a.noise.size(); ++i) {
        const auto diff = a.noise[i] - b.noise[i];
        dev = std::max({dev, diff.u().cwiseAbs().maxCoeff(), diff.v().cwiseAbs().maxCoeff()});
    }
    return dev;
}

InputOutputSolution solve_input_output(const CavityParams& p) {
    return solve_input_output(build_round_trip(p), p.R);
}

InputOutputSolution solve_input_output(const RoundTripRelation& round_trip, double reflectivity) {
    ElementSpec{ElementKind::RightMirror, reflectivity}.validate();
    const double refl = -std::sqrt(reflectivity);
    const cplx trans = kI * std::sqrt(1.0 - reflectivity);

    // Doubled unknowns X = (a_1L, b_1L, a_1L^dag, b_1L^dag), one row of 8
    // input coefficients each. The mirror closes the loop:
    //   X = refl (A X + N) + T_in,
    // with T_in the transmitted inputs (conjugated on the dagger rows).
    CMatrix N(4, 8);
    for (Eigen::Index i = 0; i < 4; ++i) N.row(i) = coefficient_row(round_trip.noise[static_cast<std::size_t>(i)]);
    CMatrix Tin = CMatrix::Zero(4, 8);
    Tin(0, 0) = trans;
    Tin(1, 1) = trans;
    Tin(2, 4) = std::conj(trans);
    Tin(3, 5) = std::conj(trans);

    const CMatrix loop = refl * round_trip.A;
    const CMatrix system = CMatrix::Identity(4, 4) - loop;

    const Eigen::JacobiSVD<CMatrix> svd(system);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    const double cond = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();

    const Eigen::ComplexEigenSolver<CMatrix> eig(loop, false);
    const double radius = eig.eigenvalues().cwiseAbs().maxCoeff();

    if (!(cond <= kMaxConditionNumber) || radius >= 1.0) {
        std::ostringstream msg;
        msg << "closed-loop system is singular or unstable (condition number " << cond << ", loop gain " << radius
            << "): operating at or above the oscillation threshold";
        throw SingularAtThreshold(msg.str());
    }

    const CMatrix X = system.partialPivLu().solve(refl * N + Tin);
    const CMatrix XR = round_trip.A * X + N;

    Eigen::Matrix<cplx, 2, 8> coeffs = trans * XR.topRows(2);
    coeffs(0, 0) += refl;
    coeffs(1, 1) += refl;

    InputOutputSolution sol{
        expansion_from_row(coeffs.row(0)),
        expansion_from_row(coeffs.row(1)),
        {expansion_from_row(X.row(0)), expansion_from_row(X.row(1)), expansion_from_row(XR.row(0)),
         expansion_from_row(XR.row(1))},
        coeffs,
        cond,
        radius,
    };
    return sol;
}

Eigen::Matrix2cd noise_commutators(const CavityParams& p) {
    const auto rt = build_round_trip(p);
    Eigen::Matrix2cd table;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) table(i, j) = commutator(rt.noise[i], rt.noise[j]);
    }
    return table;
}

}  // namespace opo

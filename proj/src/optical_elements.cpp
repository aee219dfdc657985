#include "opo/optical_elements.hpp"

#include <cmath>
#include <sstream>

namespace opo {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw InvalidParameter(std::string(name) + " must be finite");
}

void require_range(double x, double lo, double hi, bool hi_inclusive, const char* name) {
    require_finite(x, name);
    if (x < lo || (hi_inclusive ? x > hi : x >= hi)) {
        std::ostringstream msg;
        msg << name << " = " << x << " is outside [" << lo << ", " << hi << (hi_inclusive ? "]" : ")");
        throw InvalidParameter(msg.str());
    }
}

}  // namespace

std::string_view to_string(ElementKind kind) noexcept {
    switch (kind) {
        case ElementKind::RightMirror: return "right_mirror";
        case ElementKind::Rotator: return "rotator";
        case ElementKind::Crystal: return "crystal";
        case ElementKind::Absorber: return "absorber";
        case ElementKind::Delay: return "delay";
        case ElementKind::LeftMirror: return "left_mirror";
    }
    return "unknown";
}

std::string_view to_string(Direction dir) noexcept {
    return dir == Direction::Left ? "left" : "right";
}

ElementKind element_kind_from_string(std::string_view name) {
    for (auto k : {ElementKind::RightMirror, ElementKind::Rotator, ElementKind::Crystal, ElementKind::Absorber,
                   ElementKind::Delay, ElementKind::LeftMirror}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidParameter("unknown element kind '" + std::string(name) + "'");
}

Direction direction_from_string(std::string_view name) {
    if (name == "left") return Direction::Left;
    if (name == "right") return Direction::Right;
    throw InvalidParameter("direction must be 'left' or 'right', got '" + std::string(name) + "'");
}

void ElementSpec::validate() const {
    switch (kind) {
        case ElementKind::RightMirror: require_range(param, 0.0, 1.0, false, "R"); break;
        case ElementKind::Rotator: require_finite(param, "phi"); break;
        case ElementKind::Crystal:
            require_finite(param, "G");
            if (param < 1.0) throw InvalidParameter("G must be >= 1");
            break;
        case ElementKind::Absorber: require_range(param, 0.0, 1.0, true, "t"); break;
        case ElementKind::Delay: require_finite(param, "theta"); break;
        case ElementKind::LeftMirror: break;
    }
}

std::size_t ElementSpec::ports() const noexcept {
    return kind == ElementKind::Absorber ? 3 : 2;
}

BogoliubovMap right_mirror_relations(double reflectivity) {
    require_range(reflectivity, 0.0, 1.0, false, "R");
    const cplx refl = -std::sqrt(reflectivity);
    const cplx trans = kI * std::sqrt(1.0 - reflectivity);
    CMatrix U(2, 2);
    // x_out = T x_1R + R x_in ;  x_1L = R x_1R + T x_in
    U << trans, refl, refl, trans;
    return BogoliubovMap(U, CMatrix::Zero(2, 2));
}

BogoliubovMap rotator_relations(double phi, Direction /*dir*/) {
    require_finite(phi, "phi");
    // Faraday rotator: the same sense in both passes, so a round trip
    // rotates by 2 phi.
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    CMatrix U(2, 2);
    U << c, s, -s, c;
    return BogoliubovMap(U, CMatrix::Zero(2, 2));
}

BogoliubovMap crystal_relations(double gain, Direction dir) {
    require_finite(gain, "G");
    if (gain < 1.0) throw InvalidParameter("G must be >= 1");
    // Phase matching only for left-travelling light.
    if (dir == Direction::Right) return BogoliubovMap::identity(2);
    const double coupling = std::sqrt(gain * gain - 1.0);
    CMatrix V(2, 2);
    V << 0.0, coupling, coupling, 0.0;
    return BogoliubovMap(gain * CMatrix::Identity(2, 2), V);
}

BogoliubovMap absorber_relations(double transmission, Direction /*dir*/) {
    require_range(transmission, 0.0, 1.0, true, "t");
    // Loss on the x (a) polarization only; f_in is f_L,in on the left pass
    // and f_R,in on the right pass.
    const cplx t = transmission;
    const cplx r = kI * std::sqrt(1.0 - transmission * transmission);
    CMatrix U(3, 3);
    U << t, 0.0, r,
         0.0, 1.0, 0.0,
         r, 0.0, t;
    return BogoliubovMap(U, CMatrix::Zero(3, 3));
}

BogoliubovMap delay_relations(double theta) {
    require_finite(theta, "theta");
    return BogoliubovMap(std::exp(kI * theta) * CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
}

BogoliubovMap left_mirror_relations() {
    return BogoliubovMap(-CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
}

BogoliubovMap element_map(const ElementSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case ElementKind::RightMirror: return right_mirror_relations(spec.param);
        case ElementKind::Rotator: return rotator_relations(spec.param, spec.direction);
        case ElementKind::Crystal: return crystal_relations(spec.param, spec.direction);
        case ElementKind::Absorber: return absorber_relations(spec.param, spec.direction);
        case ElementKind::Delay: return delay_relations(spec.param);
        case ElementKind::LeftMirror: return left_mirror_relations();
    }
    throw InvalidParameter("unknown element kind");
}

}  // namespace opo

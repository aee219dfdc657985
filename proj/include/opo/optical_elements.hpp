#pragma once

// Scattering relations of the intracavity elements.
//
// Port conventions (inputs -> outputs, same order on both sides):
//   right mirror : (x_1R, x_in)  -> (x_out, x_1L)   one map per polarization
//   rotator      : (a, b)        -> (a, b)
//   crystal      : (a, b)        -> (a, b)
//   absorber     : (a, b, f_in)  -> (a, b, f_out)
//   delay        : (a, b)        -> (a, b)
//   left mirror  : (a, b)        -> (a, b)
//
// Operator phases are referenced to z = 0 and elements are infinitely thin;
// all propagation phase is carried by the delay element.

#include <string>
#include <string_view>

#include "opo/bogoliubov.hpp"

namespace opo {

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Direction { Left, Right };

enum class ElementKind { RightMirror, Rotator, Crystal, Absorber, Delay, LeftMirror };

std::string_view to_string(ElementKind kind) noexcept;
std::string_view to_string(Direction dir) noexcept;
ElementKind element_kind_from_string(std::string_view name);
Direction direction_from_string(std::string_view name);

/// One element of the cavity chain. `param` is R, phi, G, t or theta
/// depending on `kind`; the left mirror ignores it.
struct ElementSpec {
    ElementKind kind;
    double param = 0.0;
    Direction direction = Direction::Left;

    /// Throws InvalidParameter when `param` is outside the element's range.
    void validate() const;

    /// Number of ports of the element's map.
    std::size_t ports() const noexcept;
};

BogoliubovMap right_mirror_relations(double reflectivity);
BogoliubovMap rotator_relations(double phi, Direction dir);
BogoliubovMap crystal_relations(double gain, Direction dir);
BogoliubovMap absorber_relations(double transmission, Direction dir);
BogoliubovMap delay_relations(double theta);
BogoliubovMap left_mirror_relations();

BogoliubovMap element_map(const ElementSpec& spec);

}  // namespace opo

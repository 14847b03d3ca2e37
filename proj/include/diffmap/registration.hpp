#pragma once

#include "diffmap/field.hpp"

namespace diffmap {

/// Best alignment of `b` onto `a` over cyclic translations and inversion.
struct Registration {
    double distance = 0.0;
    Offset shift{0, 0, 0};  // b is translated by this offset
    bool inverted = false;  // b(r) -> b(-r) applied before translating
};

Registration register_fields(const ObjectField& a, const ObjectField& b);

/// min over translations T and inversion of ||a - T(b)||.
double registered_distance(const ObjectField& a, const ObjectField& b);

/// Applies a registration to `b`, returning the copy aligned with `a`.
ObjectField apply_registration(const ObjectField& b, const Registration& reg);

}  // namespace diffmap

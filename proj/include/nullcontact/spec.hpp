#pragma once

// Region spec files (JSON). Kinds:
//   {"kind": "ellipsoid", "a": 1.0, "b": 1.0}
//   {"kind": "revolution", "rho_poly": [c0, c1, ...], "t_min": -1, "t_max": 1}
//   {"kind": "diamond"}
//   {"kind": "ball_union", "c1": [t, x, y], "c2": [t, x, y], "radius": 1, "smoothing": 0.05}
//   {"kind": "transformed", "base": {...}, "boost": {"rapidity": 0.5, "axis": [1, 0]},
//    "rotate": angle, "dilate": scale, "translate": [dt, dx, dy]}
// A transformed spec applies boost, rotate, dilate and translate in that
// order; every factor is optional.

#include <string>
#include <string_view>

#include "nullcontact/regions.hpp"

namespace nc {

// Throws Parse for malformed JSON or a malformed spec, and the constructor's
// error (BadProfile, InvalidArgument) for well-formed specs of invalid regions.
Region parse_region_spec(std::string_view text);
Region load_region_spec(const std::string& path);

}  // namespace nc

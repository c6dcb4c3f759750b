#pragma once

#include "plp/ast.hpp"

namespace plp {

// Source-to-source inversion: sequences reverse, branches invert in place,
// NOT is self-inverse, Ph/RY angles are negated at the angle-function level
// (Ph via 2*pi - e, RY via -e), and calls go to inverse procedures. A
// procedure whose inverted body coincides with an existing body is reused, so
// self-inverse procedures stay as they are and inverting twice restores the
// original program.
Program invertProgram(const Program& p);

}  // namespace plp

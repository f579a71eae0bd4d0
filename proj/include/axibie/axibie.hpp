#pragma once
// Umbrella header: the whole library in dependency order.

#include "axibie/version.hpp"    // IWYU pragma: export
#include "axibie/errors.hpp"     // IWYU pragma: export
#include "axibie/util.hpp"       // IWYU pragma: export
#include "axibie/elliptic.hpp"   // IWYU pragma: export
#include "axibie/bessel.hpp"     // IWYU pragma: export
#include "axibie/jet.hpp"        // IWYU pragma: export
#include "axibie/material.hpp"   // IWYU pragma: export
#include "axibie/ring_kernels.hpp"  // IWYU pragma: export
#include "axibie/contour.hpp"    // IWYU pragma: export
#include "axibie/hankel.hpp"     // IWYU pragma: export
#include "axibie/halfplane.hpp"  // IWYU pragma: export
#include "axibie/bie.hpp"        // IWYU pragma: export
#include "axibie/field.hpp"      // IWYU pragma: export
#include "axibie/io.hpp"         // IWYU pragma: export

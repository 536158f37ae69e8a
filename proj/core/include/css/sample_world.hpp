#pragma once

#include "css/model.hpp"

namespace css {

/// Small manufacturing world used by `css match` when no world file is given
/// and by the end-to-end tests: resource r-a drills (depth <= 15 mm) and
/// screws, r-b only drills.
WorldModel sample_world();

/// Drill 12 mm deep, then drive a 25 mm screw.
Product sample_product(const WorldModel& world);

}  // namespace css

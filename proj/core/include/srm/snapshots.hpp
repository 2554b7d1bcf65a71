#pragma once

#include "srm/engine.hpp"
#include "srm/shape.hpp"
#include "srm/spherodisk.hpp"

namespace srm {

using DiskSnapshot = Snapshot<DiskShape>;
using SphereSnapshot = Snapshot<BallShape>;
using PlateletSnapshot = Snapshot<SpherodiskShape>;

}  // namespace srm

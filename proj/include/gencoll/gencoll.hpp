#pragma once

#include "gencoll/collision_graph.hpp"
#include "gencoll/offsets.hpp"
#include "gencoll/protocol.hpp"
#include "gencoll/rational.hpp"
#include "gencoll/region.hpp"
#include "gencoll/simulator.hpp"
#include "gencoll/spectral.hpp"

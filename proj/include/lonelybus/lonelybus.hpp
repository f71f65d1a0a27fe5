#pragma once

#include "lonelybus/events.hpp"
#include "lonelybus/exact_dist.hpp"
#include "lonelybus/model.hpp"
#include "lonelybus/montecarlo.hpp"
#include "lonelybus/rational.hpp"
#include "lonelybus/verifier.hpp"

namespace lonelybus {

inline constexpr const char* version = "1.0.0";

}  // namespace lonelybus

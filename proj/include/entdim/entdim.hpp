// entdim.hpp — umbrella header.

#pragma once

#include "bases.hpp"
#include "bounds.hpp"
#include "core.hpp"
#include "factory.hpp"
#include "io.hpp"
#include "metrology.hpp"
#include "multipartite.hpp"
#include "qfim.hpp"
#include "states.hpp"
#include "witnesses.hpp"

namespace entdim {
inline constexpr const char* version = "0.1.0";
}

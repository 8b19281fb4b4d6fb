#pragma once

#include "mhm/error.hpp"
#include "mhm/circle.hpp"
#include "mhm/structure.hpp"
#include "mhm/cross_ratio.hpp"
#include "mhm/axioms.hpp"
#include "mhm/bisection.hpp"
#include "mhm/lines.hpp"
#include "mhm/strip.hpp"
#include "mhm/zigzag.hpp"
#include "mhm/neighborhood.hpp"
#include "mhm/shift.hpp"
#include "mhm/delta.hpp"

#pragma once

#include "dnl/error.hpp"
#include "dnl/exponents.hpp"
#include "dnl/g_function.hpp"
#include "dnl/geometry.hpp"
#include "dnl/grid.hpp"
#include "dnl/mollifiers.hpp"

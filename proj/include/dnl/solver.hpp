#pragma once

#include "dnl/solver/analysis.hpp"
#include "dnl/solver/problem.hpp"
#include "dnl/solver/step.hpp"
#include "dnl/solver/sweep.hpp"
#include "dnl/solver/trajectory.hpp"

#pragma once

#include "dnl/diagnostics/extinction.hpp"
#include "dnl/diagnostics/gradient.hpp"
#include "dnl/diagnostics/harnack.hpp"
#include "dnl/diagnostics/report.hpp"
#include "dnl/diagnostics/source.hpp"

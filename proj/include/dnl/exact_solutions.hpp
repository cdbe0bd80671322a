#pragma once

#include "dnl/exact/closed_form.hpp"
#include "dnl/exact/critical_b.hpp"
#include "dnl/exact/residual.hpp"

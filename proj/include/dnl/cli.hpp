#pragma once

#include "dnl/cli/app.hpp"
#include "dnl/cli/commands.hpp"
#include "dnl/cli/config.hpp"
#include "dnl/cli/presets.hpp"
#include "dnl/cli/schema.hpp"

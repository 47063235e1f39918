#pragma once

#include "linemodel.hpp"
#include "powerflow.hpp"
#include "sweep.hpp"
#include "tuning.hpp"

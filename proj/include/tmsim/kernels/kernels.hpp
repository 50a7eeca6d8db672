#pragma once

#include "tmsim/kernels/basic.hpp"
#include "tmsim/kernels/bump.hpp"

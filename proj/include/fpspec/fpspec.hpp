#pragma once

#include "fpspec/decay.hpp"
#include "fpspec/errors.hpp"
#include "fpspec/evolution.hpp"
#include "fpspec/gauss_legendre.hpp"
#include "fpspec/grid.hpp"
#include "fpspec/io.hpp"
#include "fpspec/kernel.hpp"
#include "fpspec/special.hpp"
#include "fpspec/spectral.hpp"
#include "fpspec/weighted_space.hpp"

#pragma once

#include "trivortex/analytic.hpp"
#include "trivortex/compare.hpp"
#include "trivortex/detector.hpp"
#include "trivortex/diffraction.hpp"
#include "trivortex/error.hpp"
#include "trivortex/io.hpp"
#include "trivortex/lattice.hpp"
#include "trivortex/wavefield.hpp"

#pragma once

// Umbrella header: trajectory smoothing by Lagrangian open-curve evolution
// (curvature diffusion + attraction to the original curve + asymptotically
// uniform tangential redistribution) and velocity reconstruction on the
// smoothed curve.

#include "trajsmooth/attraction.hpp"
#include "trajsmooth/curve.hpp"
#include "trajsmooth/errors.hpp"
#include "trajsmooth/evolution.hpp"
#include "trajsmooth/io.hpp"
#include "trajsmooth/resample.hpp"
#include "trajsmooth/svg.hpp"
#include "trajsmooth/tridiagonal.hpp"
#include "trajsmooth/vec2.hpp"
#include "trajsmooth/velocity.hpp"

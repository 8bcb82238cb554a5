#pragma once
// Umbrella header: ground-state machinery for the planar coupled Hartree
// system with logarithmic convolution kernel.

#include "lcgs/config.hpp"
#include "lcgs/experiments.hpp"
#include "lcgs/fft.hpp"
#include "lcgs/fiber.hpp"
#include "lcgs/functionals.hpp"
#include "lcgs/grid.hpp"
#include "lcgs/io.hpp"
#include "lcgs/kernel.hpp"
#include "lcgs/solver.hpp"
#include "lcgs/verify.hpp"

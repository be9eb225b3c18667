#pragma once

// Umbrella header for the simulation library (the harness lives under qtorus/harness/).

#include "qtorus/chord.hpp"
#include "qtorus/concurrence.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/fourier.hpp"
#include "qtorus/geometry.hpp"
#include "qtorus/harper.hpp"
#include "qtorus/noise.hpp"
#include "qtorus/parallel.hpp"
#include "qtorus/phase_space.hpp"
#include "qtorus/random.hpp"
#include "qtorus/state.hpp"
#include "qtorus/trajectories.hpp"
#include "qtorus/translation.hpp"

#pragma once

// Umbrella header for the depnet core library.

#include "depnet/datagen.hpp"
#include "depnet/dataset_io.hpp"
#include "depnet/errors.hpp"
#include "depnet/exact.hpp"
#include "depnet/ext_real.hpp"
#include "depnet/geometry.hpp"
#include "depnet/learning.hpp"
#include "depnet/model_io.hpp"
#include "depnet/network.hpp"
#include "depnet/numerics.hpp"
#include "depnet/rng.hpp"
#include "depnet/sampler.hpp"
#include "depnet/scan_weights.hpp"
#include "depnet/state_space.hpp"
#include "depnet/version.hpp"

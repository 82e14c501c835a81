#pragma once

#include "nonfrac/error.hpp"
#include "nonfrac/estimate.hpp"
#include "nonfrac/fitloss.hpp"
#include "nonfrac/forecast.hpp"
#include "nonfrac/harness.hpp"
#include "nonfrac/harness_io.hpp"
#include "nonfrac/model.hpp"
#include "nonfrac/parallel.hpp"
#include "nonfrac/rng.hpp"
#include "nonfrac/simulate.hpp"
#include "nonfrac/specfun.hpp"
#include "nonfrac/spectral.hpp"
#include "nonfrac/stats.hpp"
#include "nonfrac/version.hpp"

#pragma once

#include "labelnoise/baselines.hpp"
#include "labelnoise/core.hpp"
#include "labelnoise/dataset.hpp"
#include "labelnoise/experiments.hpp"
#include "labelnoise/isotonic.hpp"
#include "labelnoise/isotron.hpp"
#include "labelnoise/metrics.hpp"
#include "labelnoise/noise.hpp"
#include "labelnoise/oracle.hpp"
#include "labelnoise/rng.hpp"

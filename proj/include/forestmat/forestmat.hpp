#pragma once

#include "forestmat/dynamic.hpp"
#include "forestmat/errors.hpp"
#include "forestmat/estimators.hpp"
#include "forestmat/forest.hpp"
#include "forestmat/generators.hpp"
#include "forestmat/graph.hpp"
#include "forestmat/oracle.hpp"
#include "forestmat/rng.hpp"
#include "forestmat/sampler.hpp"

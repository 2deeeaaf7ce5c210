#pragma once

#include "absorbing.hpp"
#include "chain.hpp"
#include "distributions.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "jump.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "mcmc.hpp"
#include "model_zoo.hpp"
#include "poisson.hpp"
#include "queueing.hpp"
#include "random_walk.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "stationary.hpp"
#include "stats.hpp"

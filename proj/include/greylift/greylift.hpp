#pragma once

#include "greylift/error.hpp"
#include "greylift/fbm_exact.hpp"
#include "greylift/greyproc.hpp"
#include "greylift/linalg.hpp"
#include "greylift/markov_lift.hpp"
#include "greylift/model.hpp"
#include "greylift/parallel.hpp"
#include "greylift/quadrature.hpp"
#include "greylift/rng.hpp"
#include "greylift/sampling.hpp"
#include "greylift/specfun.hpp"
#include "greylift/verify.hpp"

#pragma once

// Umbrella header for the constrained punctured LDGM-LDPC toolkit.

#include "cpldpc/bounds.hpp"
#include "cpldpc/channel.hpp"
#include "cpldpc/config.hpp"
#include "cpldpc/decoder.hpp"
#include "cpldpc/degree_dist.hpp"
#include "cpldpc/density_evolution.hpp"
#include "cpldpc/ensemble.hpp"
#include "cpldpc/errors.hpp"
#include "cpldpc/experiments.hpp"
#include "cpldpc/gf2.hpp"
#include "cpldpc/numerics.hpp"
#include "cpldpc/rng.hpp"

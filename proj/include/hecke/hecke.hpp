#pragma once

#include "hecke/arith.hpp"
#include "hecke/diagonal_curve.hpp"
#include "hecke/equidist_stats.hpp"
#include "hecke/gap_search.hpp"
#include "hecke/gaussian_split.hpp"
#include "hecke/maynard_sieve.hpp"
#include "hecke/measures.hpp"
#include "hecke/parallel.hpp"
#include "hecke/prime_engine.hpp"
#include "hecke/trace_cache.hpp"
#include "hecke/tuples.hpp"

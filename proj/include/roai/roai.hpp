#ifndef ROAI_ROAI_HPP
#define ROAI_ROAI_HPP

#include "roai/algorithms.hpp"
#include "roai/complexity.hpp"
#include "roai/confidence.hpp"
#include "roai/experiments.hpp"
#include "roai/instance.hpp"
#include "roai/interval.hpp"
#include "roai/io.hpp"
#include "roai/simulation.hpp"
#include "roai/stats.hpp"

#endif

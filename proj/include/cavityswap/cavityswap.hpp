#pragma once

#include "cavityswap/collective_basis.hpp"
#include "cavityswap/cli.hpp"
#include "cavityswap/common.hpp"
#include "cavityswap/config.hpp"
#include "cavityswap/experiments.hpp"
#include "cavityswap/full_model.hpp"
#include "cavityswap/gates.hpp"
#include "cavityswap/hamiltonians.hpp"
#include "cavityswap/linear.hpp"
#include "cavityswap/propagator.hpp"

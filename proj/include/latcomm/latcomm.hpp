#pragma once

#include "latcomm/babai_subdivision.hpp"
#include "latcomm/converse.hpp"
#include "latcomm/entropy.hpp"
#include "latcomm/geometry.hpp"
#include "latcomm/lattice.hpp"
#include "latcomm/majorization.hpp"
#include "latcomm/monte_carlo.hpp"
#include "latcomm/partition.hpp"
#include "latcomm/protocol.hpp"
#include "latcomm/serialization.hpp"
#include "latcomm/staircase.hpp"

#pragma once

#include "coeff_count.hpp"
#include "config_parse.hpp"
#include "dp_engine.hpp"
#include "modular_rep.hpp"
#include "nct_algebra.hpp"
#include "parallel.hpp"
#include "quantum_sim.hpp"
#include "sl2z.hpp"
#include "verify.hpp"

#pragma once

#include "strain_dec/errors.hpp"
#include "strain_dec/multilinear.hpp"
#include "strain_dec/invariants.hpp"
#include "strain_dec/random.hpp"
#include "strain_dec/lagrangian.hpp"
#include "strain_dec/stress_energy.hpp"
#include "strain_dec/dec.hpp"

#pragma once

#include "elkies/arith.hpp"
#include "elkies/charsum.hpp"
#include "elkies/constants.hpp"
#include "elkies/curve.hpp"
#include "elkies/elkies_primes.hpp"
#include "elkies/explicit_formula.hpp"
#include "elkies/parallel.hpp"
#include "elkies/sieve.hpp"

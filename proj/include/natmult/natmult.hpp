#pragma once

#include "natmult/error.hpp"
#include "natmult/field.hpp"
#include "natmult/monomial.hpp"
#include "natmult/polynomial.hpp"
#include "natmult/parse.hpp"
#include "natmult/groebner.hpp"
#include "natmult/linalg.hpp"
#include "natmult/artinian.hpp"
#include "natmult/ring_maps.hpp"
#include "natmult/assignments.hpp"
#include "natmult/multiplicity.hpp"

#pragma once

#include "spathermo/deform.hpp"
#include "spathermo/entropy.hpp"
#include "spathermo/errors.hpp"
#include "spathermo/maxent.hpp"
#include "spathermo/serialize.hpp"
#include "spathermo/simplex.hpp"
#include "spathermo/thermo.hpp"
#include "spathermo/verify.hpp"

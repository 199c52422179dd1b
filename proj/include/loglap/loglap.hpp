#pragma once

// Umbrella header.

#include "loglap/errors.hpp"
#include "loglap/specfun.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/point.hpp"
#include "loglap/field.hpp"
#include "loglap/field_spec.hpp"
#include "loglap/operators.hpp"
#include "loglap/grid.hpp"
#include "loglap/parallel.hpp"
#include "loglap/identities.hpp"
#include "loglap/report.hpp"

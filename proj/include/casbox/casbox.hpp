#pragma once

#include "analysis.hpp"
#include "certified.hpp"
#include "dirichlet.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "heat_kernel.hpp"
#include "observables.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "summation.hpp"

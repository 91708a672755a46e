#pragma once

#include "steklov/closedform.hpp"
#include "steklov/errors.hpp"
#include "steklov/harmonics.hpp"
#include "steklov/ode.hpp"
#include "steklov/oracle.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/radial.hpp"
#include "steklov/reilly.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/warp.hpp"

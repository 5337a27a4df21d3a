#pragma once

#include "moyal/errors.hpp"
#include "moyal/grid.hpp"
#include "moyal/fft.hpp"
#include "moyal/fresnel.hpp"
#include "moyal/special.hpp"
#include "moyal/ode.hpp"
#include "moyal/weyl.hpp"
#include "moyal/poly.hpp"
#include "moyal/star.hpp"
#include "moyal/propagators.hpp"
#include "moyal/starexp.hpp"

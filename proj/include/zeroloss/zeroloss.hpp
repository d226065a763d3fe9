#pragma once

#include "zeroloss/bounds.hpp"
#include "zeroloss/docmodel.hpp"
#include "zeroloss/errors.hpp"
#include "zeroloss/finitehyp.hpp"
#include "zeroloss/fitting.hpp"
#include "zeroloss/geometry.hpp"
#include "zeroloss/montecarlo.hpp"
#include "zeroloss/perceptron.hpp"
#include "zeroloss/quadrature.hpp"
#include "zeroloss/rng.hpp"
#include "zeroloss/svg.hpp"
#include "zeroloss/textio.hpp"

#pragma once

// Umbrella header.

#include "qsl/bracketing.hpp"
#include "qsl/constants.hpp"
#include "qsl/distance.hpp"
#include "qsl/errors.hpp"
#include "qsl/generator.hpp"
#include "qsl/jaynes_cummings.hpp"
#include "qsl/mat2.hpp"
#include "qsl/nonmarkov.hpp"
#include "qsl/norms.hpp"
#include "qsl/optimality.hpp"
#include "qsl/parallel.hpp"
#include "qsl/propagation.hpp"
#include "qsl/qsl_metrics.hpp"
#include "qsl/quadrature.hpp"
#include "qsl/rates.hpp"
#include "qsl/state.hpp"
#include "qsl/taxonomy.hpp"
#include "qsl/version.hpp"

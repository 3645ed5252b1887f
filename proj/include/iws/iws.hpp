#pragma once

#include "iws/distribution.hpp"
#include "iws/distributions.hpp"
#include "iws/error.hpp"
#include "iws/model.hpp"
#include "iws/montecarlo.hpp"
#include "iws/numeric.hpp"
#include "iws/ordering.hpp"
#include "iws/population.hpp"
#include "iws/strategies.hpp"
#include "iws/successive_sampling.hpp"
#include "iws/version.hpp"

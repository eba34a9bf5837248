#pragma once

#include "dynlax/errors.hpp"
#include "dynlax/liealg.hpp"
#include "dynlax/dynr.hpp"
#include "dynlax/poisson.hpp"
#include "dynlax/models.hpp"
#include "dynlax/numint.hpp"
#include "dynlax/factor.hpp"
#include "dynlax/sampling.hpp"
#include "dynlax/verify.hpp"

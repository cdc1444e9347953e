#pragma once

#include "gro/diagnostics.hpp"
#include "gro/error.hpp"
#include "gro/evariables.hpp"
#include "gro/io.hpp"
#include "gro/models.hpp"
#include "gro/numerics.hpp"
#include "gro/parallel.hpp"
#include "gro/priors.hpp"
#include "gro/ripr.hpp"

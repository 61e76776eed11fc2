#pragma once

#include "holevo/bloch_geometry.hpp"
#include "holevo/classification.hpp"
#include "holevo/errors.hpp"
#include "holevo/holevo_bounds.hpp"
#include "holevo/io.hpp"
#include "holevo/model_zoo.hpp"
#include "holevo/oracle.hpp"
#include "holevo/quantum_fisher.hpp"
#include "holevo/sampling.hpp"
#include "holevo/types.hpp"
#include "holevo/weight.hpp"

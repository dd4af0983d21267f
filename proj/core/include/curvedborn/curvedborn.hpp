#pragma once

#include "curvedborn/born_rule.hpp"
#include "curvedborn/conservation.hpp"
#include "curvedborn/currents.hpp"
#include "curvedborn/expression.hpp"
#include "curvedborn/flow.hpp"
#include "curvedborn/geometry.hpp"
#include "curvedborn/hypersurface.hpp"
#include "curvedborn/quadrature.hpp"
#include "curvedborn/types.hpp"

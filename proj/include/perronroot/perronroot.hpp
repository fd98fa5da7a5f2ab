#pragma once

#include "perronroot/errors.hpp"
#include "perronroot/harness.hpp"
#include "perronroot/matrix.hpp"
#include "perronroot/matrix_io.hpp"
#include "perronroot/perturb.hpp"
#include "perronroot/report.hpp"
#include "perronroot/solver.hpp"
#include "perronroot/structure.hpp"

#pragma once

#include "qtc/constants.hpp"
#include "qtc/de_solver.hpp"
#include "qtc/errors.hpp"
#include "qtc/exact.hpp"
#include "qtc/potential.hpp"
#include "qtc/quadrature.hpp"
#include "qtc/result.hpp"
#include "qtc/sweep.hpp"
#include "qtc/transfer_matrix.hpp"
#include "qtc/wkb_phase.hpp"

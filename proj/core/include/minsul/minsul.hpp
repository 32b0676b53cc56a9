#pragma once

#include "minsul/barriers.hpp"
#include "minsul/errors.hpp"
#include "minsul/hypotheses.hpp"
#include "minsul/io.hpp"
#include "minsul/mesh.hpp"
#include "minsul/model.hpp"
#include "minsul/ode.hpp"
#include "minsul/regime.hpp"
#include "minsul/scalar_solver.hpp"
#include "minsul/shooting.hpp"
#include "minsul/system_solver.hpp"

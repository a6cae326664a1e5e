#pragma once

#include "pipir/constraint_model.hpp"
#include "pipir/errors.hpp"
#include "pipir/kinematics.hpp"
#include "pipir/parallel.hpp"
#include "pipir/singularity.hpp"
#include "pipir/solvers.hpp"
#include "pipir/workspace.hpp"

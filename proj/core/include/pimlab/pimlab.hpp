#pragma once

#include "pimlab/conditions.hpp"
#include "pimlab/config.hpp"
#include "pimlab/error.hpp"
#include "pimlab/experiments.hpp"
#include "pimlab/history.hpp"
#include "pimlab/kernel.hpp"
#include "pimlab/nonlinear.hpp"
#include "pimlab/solver.hpp"
#include "pimlab/spectral.hpp"

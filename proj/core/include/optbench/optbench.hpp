#pragma once

#include "optbench/dataset.hpp"
#include "optbench/errors.hpp"
#include "optbench/friction.hpp"
#include "optbench/harness.hpp"
#include "optbench/io.hpp"
#include "optbench/mlp.hpp"
#include "optbench/objectives.hpp"
#include "optbench/optimizers.hpp"
#include "optbench/regret.hpp"
#include "optbench/rng.hpp"

#pragma once

// Umbrella header.

#include "ionqaoa/analysis.hpp"
#include "ionqaoa/constants.hpp"
#include "ionqaoa/errors.hpp"
#include "ionqaoa/heuristic.hpp"
#include "ionqaoa/io.hpp"
#include "ionqaoa/ionchain.hpp"
#include "ionqaoa/linalg.hpp"
#include "ionqaoa/optimizers.hpp"
#include "ionqaoa/pipeline.hpp"
#include "ionqaoa/problems.hpp"
#include "ionqaoa/rng.hpp"
#include "ionqaoa/simulator.hpp"
#include "ionqaoa/version.hpp"

#pragma once

#include "slpt/error.hpp"
#include "slpt/problem_model.hpp"
#include "slpt/liouville_transform.hpp"
#include "slpt/zeroth_basis.hpp"
#include "slpt/exact_oracle.hpp"
#include "slpt/smoothed_step.hpp"
#include "slpt/pt_engine.hpp"
#include "slpt/greens_sumrule.hpp"
#include "slpt/cylindrical.hpp"
#include "slpt/divergence_lab.hpp"
#include "slpt/reports.hpp"

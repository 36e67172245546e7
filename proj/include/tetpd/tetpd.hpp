// SPDX-License-Identifier: Apache-2.0
//! \file tetpd/tetpd.hpp
//! Umbrella header.
#pragma once

#include "tetpd/geometry.hpp"
#include "tetpd/metric.hpp"
#include "tetpd/directions.hpp"
#include "tetpd/constraints.hpp"
#include "tetpd/qp.hpp"
#include "tetpd/rigid_pd.hpp"
#include "tetpd/solver.hpp"
#include "tetpd/oracle.hpp"
#include "tetpd/io.hpp"
#include "tetpd/bench.hpp"

#pragma once

#include "rfd/equivalence.hpp"
#include "rfd/exact_design.hpp"
#include "rfd/format.hpp"
#include "rfd/information.hpp"
#include "rfd/oracle.hpp"
#include "rfd/orbit.hpp"
#include "rfd/rational.hpp"
#include "rfd/solver.hpp"
#include "rfd/tables.hpp"

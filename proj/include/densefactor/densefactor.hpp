#pragma once

#include "densefactor/cli.hpp"
#include "densefactor/dense.hpp"
#include "densefactor/element.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/filtration.hpp"
#include "densefactor/greedy.hpp"
#include "densefactor/group.hpp"
#include "densefactor/scenario.hpp"
#include "densefactor/subgroup.hpp"
#include "densefactor/topology.hpp"
#include "densefactor/verify.hpp"

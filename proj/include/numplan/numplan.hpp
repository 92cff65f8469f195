#pragma once

#include "numplan/error.hpp"
#include "numplan/model.hpp"
#include "numplan/semantics.hpp"
#include "numplan/heuristics.hpp"
#include "numplan/novelty.hpp"
#include "numplan/config.hpp"
#include "numplan/search.hpp"
#include "numplan/portfolio.hpp"
#include "numplan/plan_io.hpp"
#include "numplan/pddl/ast.hpp"
#include "numplan/pddl/parser.hpp"
#include "numplan/pddl/grounder.hpp"

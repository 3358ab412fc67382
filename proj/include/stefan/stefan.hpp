#pragma once

#include "stefan/kernel.hpp"
#include "stefan/problem.hpp"
#include "stefan/energy.hpp"
#include "stefan/wellposedness.hpp"
#include "stefan/stefan_conditions.hpp"
#include "stefan/optimizer.hpp"
#include "stefan/oracles.hpp"
#include "stefan/solution.hpp"

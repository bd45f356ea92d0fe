#pragma once

#include "dabopt/pwl.hpp"
#include "dabopt/interp.hpp"
#include "dabopt/datastore.hpp"
#include "dabopt/electrical.hpp"
#include "dabopt/semis.hpp"
#include "dabopt/cooling.hpp"
#include "dabopt/magnetics.hpp"
#include "dabopt/capbank.hpp"
#include "dabopt/synthesis.hpp"

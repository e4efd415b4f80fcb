#pragma once

#include "qspeed/params.hpp"
#include "qspeed/numerics.hpp"
#include "qspeed/spectral.hpp"
#include "qspeed/bound_state.hpp"
#include "qspeed/dynamics.hpp"
#include "qspeed/oracle.hpp"
#include "qspeed/measures.hpp"
#include "qspeed/sweep.hpp"
#include "qspeed/io.hpp"
#include "qspeed/validate.hpp"

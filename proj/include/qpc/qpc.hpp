#pragma once

#include "qpc/annulus.hpp"
#include "qpc/bounds.hpp"
#include "qpc/cocycle.hpp"
#include "qpc/error.hpp"
#include "qpc/jets.hpp"
#include "qpc/laurent.hpp"
#include "qpc/lyapunov.hpp"
#include "qpc/matrix.hpp"
#include "qpc/model_config.hpp"

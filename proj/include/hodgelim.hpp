#pragma once

#include "hodgelim/rational.hpp"
#include "hodgelim/poly.hpp"
#include "hodgelim/matrix.hpp"
#include "hodgelim/module_basis.hpp"
#include "hodgelim/bundle.hpp"
#include "hodgelim/parabolic.hpp"
#include "hodgelim/hodge.hpp"
#include "hodgelim/connection.hpp"
#include "hodgelim/kostov.hpp"
#include "hodgelim/sampling.hpp"
#include "hodgelim/strata.hpp"
#include "hodgelim/cohom.hpp"
#include "hodgelim/io.hpp"

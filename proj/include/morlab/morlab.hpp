#pragma once

#include "morlab/aut.hpp"
#include "morlab/bench.hpp"
#include "morlab/dlog.hpp"
#include "morlab/errors.hpp"
#include "morlab/extfield.hpp"
#include "morlab/fp.hpp"
#include "morlab/intarith.hpp"
#include "morlab/matrix.hpp"
#include "morlab/mor.hpp"
#include "morlab/pgroup.hpp"
#include "morlab/platform.hpp"
#include "morlab/poly.hpp"
#include "morlab/rng.hpp"
#include "morlab/serialize.hpp"

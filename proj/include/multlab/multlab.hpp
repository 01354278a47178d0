#pragma once

#include "multlab/error.hpp"
#include "multlab/arith.hpp"
#include "multlab/unit_value.hpp"
#include "multlab/cyclotomic.hpp"
#include "multlab/multfunc.hpp"
#include "multlab/characters.hpp"
#include "multlab/pretentious.hpp"
#include "multlab/correlations.hpp"
#include "multlab/closedform.hpp"
#include "multlab/density.hpp"
#include "multlab/io.hpp"
#include "multlab/explab.hpp"

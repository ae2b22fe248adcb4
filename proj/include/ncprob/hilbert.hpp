#pragma once

#include "ncprob/chsh.hpp"
#include "ncprob/gns.hpp"
#include "ncprob/lattice.hpp"
#include "ncprob/operators.hpp"
#include "ncprob/pvm.hpp"

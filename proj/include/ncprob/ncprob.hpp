#pragma once

#include "ncprob/classical.hpp"
#include "ncprob/construct.hpp"
#include "ncprob/eur.hpp"
#include "ncprob/hilbert.hpp"

#pragma once

#include "ncprob/certify.hpp"
#include "ncprob/partition.hpp"
#include "ncprob/sphere_optimizer.hpp"
#include "ncprob/uncertainty.hpp"

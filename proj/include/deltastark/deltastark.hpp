#pragma once

#include "dynamics.hpp"
#include "kernels.hpp"
#include "lambda.hpp"
#include "oracle.hpp"
#include "quad.hpp"
#include "specfun.hpp"
#include "sweep.hpp"

#pragma once

#include "airy.hpp"
#include "bessel.hpp"
#include "erfc.hpp"
#include "gamma.hpp"
#include "hypergeometric.hpp"
#include "types.hpp"

#pragma once

// Umbrella header for the separated-sparsity projection library.

#include "sepsparse/approx.hpp"
#include "sepsparse/blocks.hpp"
#include "sepsparse/core.hpp"
#include "sepsparse/deterministic.hpp"
#include "sepsparse/dp.hpp"
#include "sepsparse/dual.hpp"
#include "sepsparse/errors.hpp"
#include "sepsparse/io.hpp"
#include "sepsparse/lagrangian.hpp"
#include "sepsparse/recovery.hpp"
#include "sepsparse/wide_int.hpp"

#pragma once

#include "rafilter/algebra.hpp"
#include "rafilter/birkhoff.hpp"
#include "rafilter/config.hpp"
#include "rafilter/congruence.hpp"
#include "rafilter/embedding.hpp"
#include "rafilter/error.hpp"
#include "rafilter/io.hpp"
#include "rafilter/partition.hpp"
#include "rafilter/product.hpp"
#include "rafilter/random.hpp"
#include "rafilter/rng.hpp"
#include "rafilter/subset.hpp"
#include "rafilter/suites.hpp"
#include "rafilter/types.hpp"
#include "rafilter/ultraproduct.hpp"
